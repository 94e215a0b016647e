/* io.hh -- text format for s-AFAs.
 *
 *   safa algebra=interval [max=N]        or   safa algebra=bv atoms=p,q,r
 *   states 5
 *   initial 0 & 1
 *   final 1 2
 *   0 --[97-122]--> 1 | (2 & 3)
 *
 * `#` starts a comment.  States are written as indices, optionally with a
 * `q` prefix.  Interval guards are `[lo-hi c ...]`, `true` or `false`, with
 * an optional leading `!`; bitvector guards are propositional terms over
 * the declared atoms.
 */

#ifndef SAFA_IO_HH_
#define SAFA_IO_HH_

#include <cctype>
#include <algorithm>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <safa/automaton.hh>
#include <safa/bdd.hh>
#include <safa/interval.hh>

namespace safa
{

using any_automaton = std::variant<automaton<interval_algebra>, automaton<bv_algebra>>;

/// Algebra instances and formula store shared by every automaton read
/// through it, so that automata from several files can be combined.
struct load_context
{
	std::shared_ptr<interval_algebra> interval;
	std::shared_ptr<bv_algebra> bv;
	std::shared_ptr<pbf_store> store = std::make_shared<pbf_store>();
};

namespace detail
{
/// Recursive-descent reader over one line.
class term_reader
{
public:
	term_reader(std::string_view text, std::size_t line, std::size_t col0)
		: text_(text), line_(line), col0_(col0) { }

	[[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, line_, col0_ + pos_ + 1); }

	void skip_ws()
	{
		while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) { ++pos_; }
	}

	bool at_end()
	{
		skip_ws();
		return pos_ >= text_.size();
	}

	bool accept(char c)
	{
		skip_ws();
		if (pos_ < text_.size() && text_[pos_] == c) {
			++pos_;
			return true;
		}
		return false;
	}

	void expect(char c)
	{
		if (!accept(c)) { fail(std::string("expected '") + c + "'"); }
	}

	std::string ident()
	{
		skip_ws();
		const std::size_t b = pos_;
		while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
			++pos_;
		}
		if (b == pos_) { fail("expected a name"); }
		return std::string(text_.substr(b, pos_ - b));
	}

	std::uint64_t number()
	{
		skip_ws();
		const std::size_t b = pos_;
		int base = 10;
		if (pos_ + 1 < text_.size() && text_[pos_] == '0' && (text_[pos_ + 1] == 'x' || text_[pos_ + 1] == 'X')) {
			base = 16;
			pos_ += 2;
		}
		const std::size_t digits = pos_;
		std::uint64_t v = 0;
		while (pos_ < text_.size() && std::isxdigit(static_cast<unsigned char>(text_[pos_]))) {
			const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_])));
			const int d = std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : c - 'a' + 10;
			if (d >= base) { break; }
			v = v * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(d);
			if (v > 0xFFFFFFFFULL) { fail("number too large"); }
			++pos_;
		}
		if (pos_ == digits) {
			pos_ = b;
			fail("expected a number");
		}
		return v;
	}

	char peek()
	{
		skip_ws();
		return pos_ < text_.size() ? text_[pos_] : '\0';
	}

	std::size_t pos() const { return pos_; }
	void seek(std::size_t p) { pos_ = p; }

private:
	std::string_view text_;
	std::size_t line_;
	std::size_t col0_;
	std::size_t pos_ = 0;
};

class pbf_reader
{
public:
	pbf_reader(term_reader& in, pbf_store& store, std::size_t states) : in_(in), store_(store), n_(states) { }

	pbf parse()
	{
		pbf p = parse_or();
		if (!in_.at_end()) { in_.fail("unexpected text after formula"); }
		return p;
	}

private:
	pbf parse_or()
	{
		pbf p = parse_and();
		while (in_.accept('|')) { p = store_.disj(p, parse_and()); }
		return p;
	}

	pbf parse_and()
	{
		pbf p = parse_atom();
		while (in_.accept('&')) { p = store_.conj(p, parse_atom()); }
		return p;
	}

	pbf parse_atom()
	{
		if (in_.accept('(')) {
			pbf p = parse_or();
			in_.expect(')');
			return p;
		}
		const char c = in_.peek();
		if (std::isdigit(static_cast<unsigned char>(c))) { return state(in_.number()); }
		if (c == 'q' || c == 't' || c == 'f') {
			const std::size_t at = in_.pos();
			const std::string w = in_.ident();
			if (w == "true") { return pbf_store::tt; }
			if (w == "false") { return pbf_store::ff; }
			if (w.size() > 1 && w[0] == 'q' && std::all_of(w.begin() + 1, w.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
				return state(std::stoull(w.substr(1)));
			}
			in_.seek(at);
		}
		in_.fail("expected a state, true, false or '('");
	}

	pbf state(std::uint64_t s)
	{
		if (s >= n_) { in_.fail("state " + std::to_string(s) + " out of range"); }
		return store_.state(static_cast<state_id>(s));
	}

	term_reader& in_;
	pbf_store& store_;
	std::size_t n_;
};

inline interval_predicate read_interval_guard(term_reader& in, interval_algebra& alg)
{
	if (in.accept('!')) { return alg.negate(read_interval_guard(in, alg)); }
	if (in.accept('[')) {
		std::vector<interval_algebra::interval> ivs;
		while (!in.accept(']')) {
			if (in.at_end()) { in.fail("missing ']'"); }
			const auto lo = in.number();
			auto hi = lo;
			if (in.accept('-')) { hi = in.number(); }
			if (hi < lo) { in.fail("reversed interval"); }
			if (hi > alg.max_char()) { in.fail("character " + std::to_string(hi) + " outside the domain"); }
			ivs.emplace_back(static_cast<codepoint>(lo), static_cast<codepoint>(hi));
			in.accept(',');
		}
		return alg.from_intervals(std::move(ivs));
	}
	const std::string w = in.ident();
	if (w == "true") { return alg.top(); }
	if (w == "false") { return alg.bot(); }
	in.fail("expected an interval guard");
}

class bv_guard_reader
{
public:
	bv_guard_reader(term_reader& in, bv_algebra& alg) : in_(in), alg_(alg) { }

	bv_predicate parse_or()
	{
		auto p = parse_and();
		while (in_.accept('|')) { p = alg_.disj(p, parse_and()); }
		return p;
	}

private:
	bv_predicate parse_and()
	{
		auto p = parse_unary();
		while (in_.accept('&')) { p = alg_.conj(p, parse_unary()); }
		return p;
	}

	bv_predicate parse_unary()
	{
		if (in_.accept('!')) { return alg_.negate(parse_unary()); }
		if (in_.accept('(')) {
			auto p = parse_or();
			in_.expect(')');
			return p;
		}
		const std::size_t at = in_.pos();
		const std::string w = in_.ident();
		if (w == "true") { return alg_.top(); }
		if (w == "false") { return alg_.bot(); }
		const int idx = alg_.atom_index(w);
		if (idx < 0) {
			in_.seek(at);
			in_.fail("unknown atom '" + w + "'");
		}
		return alg_.var(static_cast<unsigned>(idx));
	}

	term_reader& in_;
	bv_algebra& alg_;
};

inline std::string_view trim(std::string_view s)
{
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) { s.remove_prefix(1); }
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) { s.remove_suffix(1); }
	return s;
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
	std::vector<std::string> out;
	std::size_t b = 0;
	while (true) {
		const std::size_t e = s.find(sep, b);
		out.emplace_back(trim(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b)));
		if (e == std::string_view::npos) { break; }
		b = e + 1;
	}
	return out;
}

struct raw_line
{
	std::size_t number;
	std::size_t indent;
	std::string_view text;
};

template <class A, class Guard>
automaton<A> build_automaton(std::shared_ptr<A> alg, load_context& ctx, const std::vector<raw_line>& body,
                             Guard&& read_guard)
{
	std::optional<std::size_t> states;
	std::optional<pbf> initial;
	std::optional<bitset> fin;
	std::vector<transition<A>> trans;
	for (const auto& ln : body) {
		term_reader in(ln.text, ln.number, ln.indent);
		const std::size_t sp = ln.text.find_first_of(" \t");
		const std::string_view key = ln.text.substr(0, sp);
		const std::string_view rest = sp == std::string_view::npos ? std::string_view{} : ln.text.substr(sp);
		term_reader rin(rest, ln.number, ln.indent + (sp == std::string_view::npos ? ln.text.size() : sp));
		if (key == "states") {
			if (states) { in.fail("duplicate 'states' line"); }
			states = rin.number();
			if (!rin.at_end()) { rin.fail("unexpected text after state count"); }
			continue;
		}
		if (!states) { in.fail("'states' must come before initial, final and transitions"); }
		if (key == "initial") {
			if (initial) { in.fail("duplicate 'initial' line"); }
			initial = pbf_reader(rin, *ctx.store, *states).parse();
		} else if (key == "final") {
			if (fin) { in.fail("duplicate 'final' line"); }
			bitset f(*states);
			while (!rin.at_end()) {
				if (rin.peek() == 'q') { rin.accept('q'); }
				const auto s = rin.number();
				if (s >= *states) { rin.fail("state " + std::to_string(s) + " out of range"); }
				f.set(static_cast<std::size_t>(s));
				rin.accept(',');
			}
			fin = std::move(f);
		} else {
			const std::size_t a = ln.text.find("--");
			if (a == std::string_view::npos) { in.fail("expected 'src --guard--> target'"); }
			const std::size_t b = ln.text.find("-->", a + 2);
			if (b == std::string_view::npos) { in.fail("missing '-->'"); }
			term_reader src_in(ln.text.substr(0, a), ln.number, ln.indent);
			if (src_in.peek() == 'q') { src_in.accept('q'); }
			const auto src = src_in.number();
			if (!src_in.at_end()) { src_in.fail("unexpected text before '--'"); }
			if (src >= *states) { src_in.fail("state " + std::to_string(src) + " out of range"); }
			term_reader guard_in(ln.text.substr(a + 2, b - a - 2), ln.number, ln.indent + a + 2);
			auto guard = read_guard(guard_in, *alg);
			if (!guard_in.at_end()) { guard_in.fail("unexpected text in guard"); }
			term_reader target_in(ln.text.substr(b + 3), ln.number, ln.indent + b + 3);
			const pbf target = pbf_reader(target_in, *ctx.store, *states).parse();
			trans.push_back({static_cast<state_id>(src), std::move(guard), target});
		}
	}
	if (!states) { throw parse_error("missing 'states' line", body.empty() ? 1 : body.back().number, 1); }
	if (!initial) { throw parse_error("missing 'initial' line", body.empty() ? 1 : body.back().number, 1); }
	if (!fin) { fin = bitset(*states); }
	return automaton<A>(std::move(alg), ctx.store, *states, *initial, std::move(*fin), std::move(trans));
}
} // namespace detail

/// Reads one automaton.  Algebra instances in `ctx` are reused when the
/// header agrees with them; a conflicting header is a usage_error.
inline any_automaton parse_automaton(std::string_view text, load_context& ctx)
{
	std::vector<detail::raw_line> lines;
	std::size_t number = 0;
	std::size_t b = 0;
	while (b <= text.size()) {
		std::size_t e = text.find('\n', b);
		if (e == std::string_view::npos) { e = text.size(); }
		++number;
		std::string_view ln = text.substr(b, e - b);
		if (const auto h = ln.find('#'); h != std::string_view::npos) { ln = ln.substr(0, h); }
		std::size_t indent = 0;
		while (indent < ln.size() && std::isspace(static_cast<unsigned char>(ln[indent]))) { ++indent; }
		const auto t = detail::trim(ln);
		if (!t.empty()) { lines.push_back({number, indent, t}); }
		b = e + 1;
	}
	if (lines.empty()) { throw parse_error("empty automaton file", 1, 1); }

	const auto& head = lines.front();
	detail::term_reader hin(head.text, head.number, head.indent);
	if (hin.ident() != "safa") { hin.fail("expected header 'safa algebra=...'"); }
	std::string algebra;
	std::optional<std::uint64_t> max;
	std::optional<std::vector<std::string>> atoms;
	while (!hin.at_end()) {
		const std::string key = hin.ident();
		hin.expect('=');
		if (key == "algebra") {
			algebra = hin.ident();
		} else if (key == "max") {
			max = hin.number();
		} else if (key == "atoms") {
			std::vector<std::string> names{hin.ident()};
			while (hin.accept(',')) { names.push_back(hin.ident()); }
			atoms = std::move(names);
		} else {
			hin.fail("unknown header field '" + key + "'");
		}
	}
	const std::vector<detail::raw_line> body(lines.begin() + 1, lines.end());

	if (algebra == "interval") {
		if (atoms) { throw parse_error("atoms= is only valid for algebra=bv", head.number, 1); }
		const codepoint m = max ? static_cast<codepoint>(*max) : interval_algebra::unicode_max;
		if (max && *max > interval_algebra::unicode_max) { throw parse_error("max exceeds U+10FFFF", head.number, 1); }
		if (!ctx.interval) {
			ctx.interval = std::make_shared<interval_algebra>(m);
		} else if (ctx.interval->max_char() != m) {
			throw usage_error("automata use interval algebras with different domains");
		}
		return detail::build_automaton(ctx.interval, ctx, body, [](detail::term_reader& in, interval_algebra& alg) {
			return detail::read_interval_guard(in, alg);
		});
	}
	if (algebra == "bv") {
		if (!atoms) { throw parse_error("algebra=bv needs atoms=...", head.number, 1); }
		if (!ctx.bv) {
			ctx.bv = std::make_shared<bv_algebra>(*atoms);
		} else if (ctx.bv->atoms() != *atoms) {
			throw usage_error("automata use bitvector algebras with different atoms");
		}
		return detail::build_automaton(ctx.bv, ctx, body, [](detail::term_reader& in, bv_algebra& alg) {
			return detail::bv_guard_reader(in, alg).parse_or();
		});
	}
	throw parse_error(algebra.empty() ? "missing algebra=" : "unknown algebra '" + algebra + "'", head.number, 1);
}

inline std::string read_file(const std::string& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in) { throw std::runtime_error("cannot open " + path); }
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

inline any_automaton load_automaton(const std::string& path, load_context& ctx)
{
	return parse_automaton(read_file(path), ctx);
}

/// Parses a formula over the states of m, using m's store.
template <boolean_algebra A>
pbf parse_config(const automaton<A>& m, std::string_view text)
{
	detail::term_reader in(text, 1, 0);
	return detail::pbf_reader(in, m.store(), m.state_count()).parse();
}

template <boolean_algebra A>
std::string to_text(const automaton<A>& m)
{
	std::ostringstream out;
	const A& alg = m.algebra();
	if constexpr (std::is_same_v<A, interval_algebra>) {
		out << "safa algebra=interval";
		if (alg.max_char() != interval_algebra::unicode_max) { out << " max=" << alg.max_char(); }
		out << '\n';
	} else {
		out << "safa algebra=bv atoms=";
		for (std::size_t i = 0; i < alg.atoms().size(); ++i) { out << (i ? "," : "") << alg.atoms()[i]; }
		out << '\n';
	}
	out << "states " << m.state_count() << '\n';
	out << "initial " << m.store().to_string(m.initial()) << '\n';
	out << "final";
	for (state_id s = 0; s < m.state_count(); ++s) {
		if (m.is_final(s)) { out << ' ' << s; }
	}
	out << '\n';
	for (const auto& t : m.transitions()) {
		out << t.source << " --" << alg.to_string(t.guard) << "--> " << m.store().to_string(t.target) << '\n';
	}
	return out.str();
}

} // namespace safa

#endif // SAFA_IO_HH_
