/* regex.hh -- a practical regular-expression subset compiled to s-FAs over
 * the interval algebra.
 *
 * Supported: literals (UTF-8), escapes (\d \w \s and their negations,
 * \t \n \r \f \v \xHH \uHHHH, escaped punctuation), classes with ranges and
 * negation, `.`, grouping ((...), (?:...), (?<name>...)), alternation and
 * the quantifiers * + ? {m} {m,} {m,n} (lazy variants accepted).  Matching
 * is always full-match: a leading `^` and trailing `$` are accepted and
 * ignored.  Counted repetition is expanded while parsing.
 */

#ifndef SAFA_REGEX_HH_
#define SAFA_REGEX_HH_

#include <algorithm>
#include <cstdio>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <safa/interval.hh>
#include <safa/sfa.hh>

namespace safa
{

struct regex_node;
using regex_ptr = std::shared_ptr<const regex_node>;

struct regex_node
{
	enum class kind { epsilon, literal, cls, any, concat, alt, star, plus, opt };
	using interval = std::pair<codepoint, codepoint>;

	kind k;
	codepoint ch = 0;                   ///< literal
	std::vector<interval> ranges;       ///< cls, canonical
	bool negated = false;               ///< cls
	std::vector<regex_ptr> items;       ///< concat / alt operands, or the single operand

	static regex_ptr make(kind k, std::vector<regex_ptr> items = {})
	{
		auto n = std::make_shared<regex_node>();
		n->k = k;
		n->items = std::move(items);
		return n;
	}

	static regex_ptr literal(codepoint c)
	{
		auto n = std::make_shared<regex_node>();
		n->k = kind::literal;
		n->ch = c;
		return n;
	}

	static regex_ptr char_class(std::vector<interval> ranges, bool negated)
	{
		auto n = std::make_shared<regex_node>();
		n->k = kind::cls;
		n->ranges = canonical(std::move(ranges));
		n->negated = negated;
		return n;
	}

	static std::vector<interval> canonical(std::vector<interval> r)
	{
		std::sort(r.begin(), r.end());
		std::vector<interval> out;
		for (const auto& iv : r) {
			if (!out.empty() && static_cast<std::uint64_t>(out.back().second) + 1 >= iv.first) {
				out.back().second = std::max(out.back().second, iv.second);
			} else {
				out.push_back(iv);
			}
		}
		return out;
	}

	/// S-expression rendering, e.g. concat(star(any),'@').
	std::string to_string() const
	{
		auto list = [&](const char* name) {
			std::string s = std::string(name) + "(";
			for (std::size_t i = 0; i < items.size(); ++i) {
				if (i != 0) { s += ","; }
				s += items[i]->to_string();
			}
			return s + ")";
		};
		switch (k) {
		case kind::epsilon: return "eps";
		case kind::literal:
			if (ch >= 0x20 && ch < 0x7f) { return std::string("'") + static_cast<char>(ch) + "'"; }
			return "U+" + std::to_string(ch);
		case kind::cls: {
			std::string s = negated ? "class^{" : "class{";
			for (std::size_t i = 0; i < ranges.size(); ++i) {
				if (i != 0) { s += ","; }
				s += "[" + std::to_string(ranges[i].first) + "," + std::to_string(ranges[i].second) + "]";
			}
			return s + "}";
		}
		case kind::any: return "any";
		case kind::concat: return list("concat");
		case kind::alt: return list("alt");
		case kind::star: return list("star");
		case kind::plus: return list("plus");
		case kind::opt: return list("opt");
		}
		return "?";
	}
};

/// Decodes UTF-8; invalid bytes are taken as Latin-1 code units.
inline std::vector<codepoint> utf8_decode(const std::string& s)
{
	std::vector<codepoint> out;
	std::size_t i = 0;
	while (i < s.size()) {
		const auto b = static_cast<unsigned char>(s[i]);
		int len = 0;
		codepoint c = 0;
		if (b < 0x80) { len = 1; c = b; }
		else if ((b & 0xE0) == 0xC0) { len = 2; c = b & 0x1F; }
		else if ((b & 0xF0) == 0xE0) { len = 3; c = b & 0x0F; }
		else if ((b & 0xF8) == 0xF0) { len = 4; c = b & 0x07; }
		bool ok = len > 0 && i + static_cast<std::size_t>(len) <= s.size();
		for (int k = 1; ok && k < len; ++k) {
			const auto cb = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
			if ((cb & 0xC0) != 0x80) { ok = false; }
			c = (c << 6) | (cb & 0x3F);
		}
		if (!ok) {
			out.push_back(b);
			++i;
		} else {
			out.push_back(c);
			i += static_cast<std::size_t>(len);
		}
	}
	return out;
}

inline std::string utf8_encode(std::span<const codepoint> cps)
{
	std::string s;
	for (codepoint c : cps) {
		if (c < 0x80) {
			s.push_back(static_cast<char>(c));
		} else if (c < 0x800) {
			s.push_back(static_cast<char>(0xC0 | (c >> 6)));
			s.push_back(static_cast<char>(0x80 | (c & 0x3F)));
		} else if (c < 0x10000) {
			s.push_back(static_cast<char>(0xE0 | (c >> 12)));
			s.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
			s.push_back(static_cast<char>(0x80 | (c & 0x3F)));
		} else {
			s.push_back(static_cast<char>(0xF0 | (c >> 18)));
			s.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
			s.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
			s.push_back(static_cast<char>(0x80 | (c & 0x3F)));
		}
	}
	return s;
}

/// Printable ASCII verbatim, everything else as \u{hex}.
inline std::string escape_word(std::span<const codepoint> w)
{
	std::string s;
	for (codepoint c : w) {
		if (c >= 0x20 && c < 0x7f && c != '\\') {
			s.push_back(static_cast<char>(c));
		} else {
			char buf[16];
			std::snprintf(buf, sizeof buf, "\\u{%x}", c);
			s += buf;
		}
	}
	return s;
}

namespace detail
{
class regex_parser
{
public:
	explicit regex_parser(const std::string& text) : cps_(utf8_decode(text)) { }

	regex_ptr parse()
	{
		if (!cps_.empty() && cps_.front() == '^') { ++pos_; }
		std::size_t end = cps_.size();
		if (end > pos_ && cps_[end - 1] == '$' && !(end >= 2 && cps_[end - 2] == '\\')) { --end; }
		end_ = end;
		auto r = parse_alt();
		if (pos_ < end_) {
			if (cps_[pos_] == ')') { fail("unbalanced ')'"); }
			fail("unexpected character");
		}
		return r;
	}

private:
	[[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, 1, pos_ + 1); }

	bool at_end() const { return pos_ >= end_; }
	codepoint peek() const { return cps_[pos_]; }

	regex_ptr parse_alt()
	{
		std::vector<regex_ptr> alts{parse_concat()};
		while (!at_end() && peek() == '|') {
			++pos_;
			alts.push_back(parse_concat());
		}
		return alts.size() == 1 ? alts[0] : regex_node::make(regex_node::kind::alt, std::move(alts));
	}

	regex_ptr parse_concat()
	{
		std::vector<regex_ptr> items;
		while (!at_end() && peek() != '|' && peek() != ')') { items.push_back(parse_quantified()); }
		if (items.empty()) { return regex_node::make(regex_node::kind::epsilon); }
		return items.size() == 1 ? items[0] : regex_node::make(regex_node::kind::concat, std::move(items));
	}

	regex_ptr parse_quantified()
	{
		regex_ptr atom = parse_atom();
		while (!at_end()) {
			const codepoint c = peek();
			if (c == '*' || c == '+' || c == '?') {
				++pos_;
				const auto k = c == '*' ? regex_node::kind::star
				             : c == '+' ? regex_node::kind::plus : regex_node::kind::opt;
				atom = regex_node::make(k, {atom});
			} else if (c == '{' && is_counter()) {
				atom = parse_counter(atom);
			} else {
				break;
			}
			if (!at_end() && peek() == '?') { ++pos_; } // lazy: same language
			if (!at_end() && peek() == '+') { fail("possessive quantifiers are not supported"); }
		}
		return atom;
	}

	bool is_counter() const
	{
		std::size_t i = pos_ + 1;
		bool digits = false;
		while (i < end_ && cps_[i] >= '0' && cps_[i] <= '9') { ++i; digits = true; }
		if (!digits) { return false; }
		if (i < end_ && cps_[i] == '}') { return true; }
		if (i >= end_ || cps_[i] != ',') { return false; }
		++i;
		while (i < end_ && cps_[i] >= '0' && cps_[i] <= '9') { ++i; }
		return i < end_ && cps_[i] == '}';
	}

	std::size_t number()
	{
		std::size_t v = 0;
		while (!at_end() && peek() >= '0' && peek() <= '9') {
			v = v * 10 + (peek() - '0');
			if (v > 1000) { fail("repetition count too large"); }
			++pos_;
		}
		return v;
	}

	/// a{m,n} -> m copies of a, then n-m nested optional copies.
	regex_ptr parse_counter(const regex_ptr& atom)
	{
		++pos_; // {
		const std::size_t lo = number();
		std::optional<std::size_t> hi = lo;
		if (peek() == ',') {
			++pos_;
			if (peek() == '}') { hi.reset(); }
			else { hi = number(); }
		}
		++pos_; // }
		if (hi && *hi < lo) { fail("repetition {m,n} with m > n"); }
		std::vector<regex_ptr> items(lo, atom);
		if (!hi) {
			items.push_back(regex_node::make(regex_node::kind::star, {atom}));
		} else {
			for (std::size_t i = lo; i < *hi; ++i) {
				items.push_back(regex_node::make(regex_node::kind::opt, {atom}));
			}
		}
		if (items.empty()) { return regex_node::make(regex_node::kind::epsilon); }
		return items.size() == 1 ? items[0] : regex_node::make(regex_node::kind::concat, std::move(items));
	}

	regex_ptr parse_atom()
	{
		const codepoint c = peek();
		switch (c) {
		case '(': return parse_group();
		case '[': return parse_class();
		case '.': ++pos_; return regex_node::make(regex_node::kind::any);
		case '\\': return parse_escape(false);
		case '*':
		case '+':
		case '?': fail("quantifier without operand");
		case '{':
			if (is_counter()) { fail("quantifier without operand"); }
			break;
		case '^': fail("anchor '^' is only supported at the start of the pattern");
		case '$': fail("anchor '$' is only supported at the end of the pattern");
		default: break;
		}
		++pos_;
		return regex_node::literal(c);
	}

	regex_ptr parse_group()
	{
		++pos_; // (
		if (!at_end() && peek() == '?') {
			++pos_;
			if (at_end()) { fail("unterminated group"); }
			const codepoint k = peek();
			if (k == ':') {
				++pos_;
			} else if (k == '=' || k == '!') {
				fail("lookahead is not supported");
			} else if (k == '<' && pos_ + 1 < end_ && (cps_[pos_ + 1] == '=' || cps_[pos_ + 1] == '!')) {
				fail("lookbehind is not supported");
			} else if (k == '<' || k == 'P' || k == '\'') {
				// named group
				if (k == 'P') { ++pos_; }
				const codepoint close = peek() == '\'' ? '\'' : '>';
				++pos_;
				while (!at_end() && peek() != close) { ++pos_; }
				if (at_end()) { fail("unterminated group name"); }
				++pos_;
			} else {
				fail("inline flags and special groups are not supported");
			}
		}
		auto inner = parse_alt();
		if (at_end() || peek() != ')') { fail("missing ')'"); }
		++pos_;
		return inner;
	}

	using ranges = std::vector<regex_node::interval>;

	static ranges digit() { return {{'0', '9'}}; }
	static ranges word() { return {{'0', '9'}, {'A', 'Z'}, {'_', '_'}, {'a', 'z'}}; }
	static ranges space() { return {{'\t', '\r'}, {' ', ' '}}; }

	static ranges complement(ranges r)
	{
		r = regex_node::canonical(std::move(r));
		ranges out;
		std::uint64_t next = 0;
		for (auto [lo, hi] : r) {
			if (next < lo) { out.emplace_back(static_cast<codepoint>(next), lo - 1); }
			next = static_cast<std::uint64_t>(hi) + 1;
		}
		if (next <= interval_algebra::unicode_max) { out.emplace_back(static_cast<codepoint>(next), interval_algebra::unicode_max); }
		return out;
	}

	codepoint hex(std::size_t digits)
	{
		codepoint v = 0;
		for (std::size_t i = 0; i < digits; ++i) {
			if (at_end()) { fail("truncated hexadecimal escape"); }
			const codepoint c = peek();
			int d;
			if (c >= '0' && c <= '9') { d = static_cast<int>(c - '0'); }
			else if (c >= 'a' && c <= 'f') { d = static_cast<int>(c - 'a' + 10); }
			else if (c >= 'A' && c <= 'F') { d = static_cast<int>(c - 'A' + 10); }
			else { fail("bad hexadecimal digit"); }
			v = v * 16 + static_cast<codepoint>(d);
			++pos_;
		}
		return v;
	}

	/// Escape at pos_.  Returns a class node or a literal.
	regex_ptr parse_escape(bool in_class)
	{
		++pos_; // backslash
		if (at_end()) { fail("trailing backslash"); }
		const codepoint c = peek();
		++pos_;
		switch (c) {
		case 'd': return regex_node::char_class(digit(), false);
		case 'D': return regex_node::char_class(digit(), true);
		case 'w': return regex_node::char_class(word(), false);
		case 'W': return regex_node::char_class(word(), true);
		case 's': return regex_node::char_class(space(), false);
		case 'S': return regex_node::char_class(space(), true);
		case 't': return regex_node::literal('\t');
		case 'n': return regex_node::literal('\n');
		case 'r': return regex_node::literal('\r');
		case 'f': return regex_node::literal('\f');
		case 'v': return regex_node::literal('\v');
		case 'x': return regex_node::literal(hex(2));
		case 'u': return regex_node::literal(hex(4));
		case 'b':
			if (in_class) { return regex_node::literal('\b'); }
			fail("word boundaries are not supported");
		case 'B': fail("word boundaries are not supported");
		case 'A':
		case 'Z':
		case 'z': fail("anchors are not supported");
		default: break;
		}
		if (c >= '1' && c <= '9') { fail("backreferences are not supported"); }
		if (c == 'k') { fail("backreferences are not supported"); }
		return regex_node::literal(c);
	}

	regex_ptr parse_class()
	{
		++pos_; // [
		bool negated = false;
		if (!at_end() && peek() == '^') {
			negated = true;
			++pos_;
		}
		ranges r;
		bool first = true;
		while (true) {
			if (at_end()) { fail("missing ']'"); }
			if (peek() == ']' && !first) {
				++pos_;
				break;
			}
			first = false;
			codepoint lo;
			if (peek() == '\\') {
				auto e = parse_escape(true);
				if (e->k == regex_node::kind::cls) {
					auto part = e->negated ? complement(e->ranges) : e->ranges;
					r.insert(r.end(), part.begin(), part.end());
					continue;
				}
				lo = e->ch;
			} else if (peek() == '[' && pos_ + 1 < end_ && cps_[pos_ + 1] == ':') {
				fail("POSIX character classes are not supported");
			} else {
				lo = peek();
				++pos_;
			}
			codepoint hi = lo;
			if (!at_end() && peek() == '-' && pos_ + 1 < end_ && cps_[pos_ + 1] != ']') {
				++pos_;
				if (peek() == '\\') {
					auto e = parse_escape(true);
					if (e->k == regex_node::kind::cls) { fail("class escape as range bound"); }
					hi = e->ch;
				} else {
					hi = peek();
					++pos_;
				}
				if (hi < lo) { fail("reversed range in character class"); }
			}
			r.emplace_back(lo, hi);
		}
		return regex_node::char_class(std::move(r), negated);
	}

	std::vector<codepoint> cps_;
	std::size_t pos_ = 0;
	std::size_t end_ = 0;
};

struct thompson
{
	struct edge
	{
		state_id from;
		interval_predicate guard;
		state_id to;
	};

	interval_algebra& alg;
	std::size_t states = 0;
	std::vector<edge> edges;
	std::vector<std::pair<state_id, state_id>> eps;

	state_id fresh() { return static_cast<state_id>(states++); }

	interval_predicate guard_of(const regex_node& n)
	{
		switch (n.k) {
		case regex_node::kind::literal: return alg.singleton(n.ch);
		case regex_node::kind::any: return alg.top();
		default: break;
		}
		std::vector<interval_algebra::interval> ivs(n.ranges.begin(), n.ranges.end());
		auto p = alg.from_intervals(std::move(ivs));
		return n.negated ? alg.negate(p) : p;
	}

	/// Fragment with entry and exit states.
	std::pair<state_id, state_id> build(const regex_node& n)
	{
		using k = regex_node::kind;
		const state_id in = fresh();
		switch (n.k) {
		case k::epsilon: return {in, in};
		case k::literal:
		case k::any:
		case k::cls: {
			const state_id out = fresh();
			edges.push_back({in, guard_of(n), out});
			return {in, out};
		}
		case k::concat: {
			state_id cur = in;
			for (const auto& item : n.items) {
				auto [a, b] = build(*item);
				eps.emplace_back(cur, a);
				cur = b;
			}
			return {in, cur};
		}
		case k::alt: {
			const state_id out = fresh();
			for (const auto& item : n.items) {
				auto [a, b] = build(*item);
				eps.emplace_back(in, a);
				eps.emplace_back(b, out);
			}
			return {in, out};
		}
		case k::star:
		case k::plus:
		case k::opt: {
			const state_id out = fresh();
			auto [a, b] = build(*n.items[0]);
			eps.emplace_back(in, a);
			eps.emplace_back(b, out);
			if (n.k != k::plus) { eps.emplace_back(in, out); }
			if (n.k != k::opt) { eps.emplace_back(b, a); }
			return {in, out};
		}
		}
		return {in, in};
	}
};
} // namespace detail

inline regex_ptr parse_regex(const std::string& text)
{
	return detail::regex_parser(text).parse();
}

/// Thompson construction followed by epsilon elimination and removal of
/// states that are unreachable or cannot reach a final state.  The result
/// accepts exactly the strings the expression matches in full.
inline sfa<interval_algebra> regex_to_sfa(const regex_node& r, std::shared_ptr<interval_algebra> alg)
{
	detail::thompson t{*alg, 0, {}, {}};
	const auto [start, accept] = t.build(r);
	const std::size_t n = t.states;

	std::vector<std::vector<state_id>> eps_out(n);
	for (auto [a, b] : t.eps) { eps_out[a].push_back(b); }
	std::vector<std::vector<std::size_t>> char_out(n);
	for (std::size_t i = 0; i < t.edges.size(); ++i) { char_out[t.edges[i].from].push_back(i); }

	auto closure = [&](state_id s) {
		std::vector<char> seen(n, 0);
		std::vector<state_id> stack{s}, out;
		seen[s] = 1;
		while (!stack.empty()) {
			const state_id x = stack.back();
			stack.pop_back();
			out.push_back(x);
			for (state_id y : eps_out[x]) {
				if (!seen[y]) {
					seen[y] = 1;
					stack.push_back(y);
				}
			}
		}
		return out;
	};

	// keep the start state and every target of a character edge
	std::vector<std::optional<state_id>> keep(n);
	std::vector<state_id> kept;
	auto add = [&](state_id s) {
		if (!keep[s]) {
			keep[s] = static_cast<state_id>(kept.size());
			kept.push_back(s);
		}
	};
	add(start);
	for (const auto& e : t.edges) { add(e.to); }

	std::vector<sfa<interval_algebra>::edge> edges;
	bitset fin(kept.size());
	for (std::size_t i = 0; i < kept.size(); ++i) {
		for (state_id x : closure(kept[i])) {
			if (x == accept) { fin.set(i); }
			for (std::size_t ei : char_out[x]) {
				edges.push_back({static_cast<state_id>(i), t.edges[ei].guard, *keep[t.edges[ei].to]});
			}
		}
	}
	sfa<interval_algebra> raw(alg, kept.size(), {0}, std::move(fin), std::move(edges));

	// trim: reachable from the start and co-reachable to a final state
	const std::size_t m = raw.state_count();
	std::vector<std::vector<state_id>> fwd(m), bwd(m);
	for (const auto& e : raw.edges()) {
		fwd[e.source].push_back(e.target);
		bwd[e.target].push_back(e.source);
	}
	auto search = [m](std::vector<state_id> frontier, const std::vector<std::vector<state_id>>& g) {
		std::vector<char> seen(m, 0);
		for (state_id s : frontier) { seen[s] = 1; }
		while (!frontier.empty()) {
			const state_id s = frontier.back();
			frontier.pop_back();
			for (state_id y : g[s]) {
				if (!seen[y]) {
					seen[y] = 1;
					frontier.push_back(y);
				}
			}
		}
		return seen;
	};
	std::vector<state_id> finals;
	for (state_id s = 0; s < m; ++s) {
		if (raw.is_final(s)) { finals.push_back(s); }
	}
	const auto reach = search({0}, fwd);
	const auto coreach = search(finals, bwd);
	std::vector<std::optional<state_id>> map(m);
	state_id next = 0;
	for (state_id s = 0; s < m; ++s) {
		if (s == 0 || (reach[s] && coreach[s])) { map[s] = next++; }
	}
	std::vector<sfa<interval_algebra>::edge> trimmed;
	for (const auto& e : raw.edges()) {
		if (map[e.source] && map[e.target] && (e.source == 0 || (reach[e.source] && coreach[e.source])) &&
		    reach[e.target] && coreach[e.target]) {
			trimmed.push_back({*map[e.source], e.guard, *map[e.target]});
		}
	}
	bitset tfin(next);
	for (state_id s = 0; s < m; ++s) {
		if (map[s]) { tfin.set(*map[s], raw.is_final(s)); }
	}
	return sfa<interval_algebra>(alg, next, {0}, std::move(tfin), std::move(trimmed));
}

inline sfa<interval_algebra> regex_to_sfa(const std::string& pattern, std::shared_ptr<interval_algebra> alg)
{
	return regex_to_sfa(*parse_regex(pattern), std::move(alg));
}

} // namespace safa

#endif // SAFA_REGEX_HH_
