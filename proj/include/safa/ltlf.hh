/* ltlf.hh -- LTL over finite traces: parsing into negation normal form and
 * translation to an s-AFA over the bitvector algebra of the atoms.
 *
 * Grammar (loosest binding first):
 *   f ::= f -> f | f '|' f | f & f | f U f | f R f
 *       | ! f | X f | N f | F f | G f | atom | true | false | ( f )
 * `->`, `U` and `R` associate to the right.  X is the strong next (a next
 * position must exist), N the weak next.
 */

#ifndef SAFA_LTLF_HH_
#define SAFA_LTLF_HH_

#include <algorithm>
#include <cctype>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <safa/automaton.hh>
#include <safa/bdd.hh>

namespace safa
{

enum class ltl_op : std::uint8_t { tt, ff, atom, neg_atom, conj, disj, next, weak_next, until, release };

/// Hash-consed NNF formulas; atoms are numbered in declaration order.
class ltlf_store
{
public:
	using id = std::uint32_t;

	struct node
	{
		ltl_op op;
		id a;
		id b;

		bool operator==(const node&) const = default;
	};

	id make(ltl_op op, id a = 0, id b = 0) { return intern({op, a, b}); }
	id tt() { return make(ltl_op::tt); }
	id ff() { return make(ltl_op::ff); }
	id atom(const std::string& name, bool negated = false)
	{
		return make(negated ? ltl_op::neg_atom : ltl_op::atom, atom_index(name));
	}

	/// Index of an atom, declaring it if new.
	id atom_index(const std::string& name)
	{
		auto [it, inserted] = atom_ids_.emplace(name, static_cast<id>(atoms_.size()));
		if (inserted) { atoms_.push_back(name); }
		return it->second;
	}

	const node& at(id f) const { return nodes_[f]; }
	const std::vector<std::string>& atoms() const { return atoms_; }
	std::size_t node_count() const { return nodes_.size(); }

	/// Distinct subformulas reachable from f, children before parents.
	std::vector<id> subformulas(id f) const
	{
		std::vector<id> order;
		std::vector<char> seen(nodes_.size(), 0);
		std::vector<std::pair<id, bool>> stack{{f, false}};
		while (!stack.empty()) {
			auto [x, done] = stack.back();
			stack.pop_back();
			if (done) {
				order.push_back(x);
				continue;
			}
			if (seen[x]) { continue; }
			seen[x] = 1;
			stack.push_back({x, true});
			for (id c : children(x)) {
				if (!seen[c]) { stack.push_back({c, false}); }
			}
		}
		return order;
	}

	std::vector<id> children(id f) const
	{
		const node& n = nodes_[f];
		switch (n.op) {
		case ltl_op::conj:
		case ltl_op::disj:
		case ltl_op::until:
		case ltl_op::release: return {n.a, n.b};
		case ltl_op::next:
		case ltl_op::weak_next: return {n.a};
		default: return {};
		}
	}

	/// Number of connectives and leaves in the syntax tree.
	std::size_t tree_size(id f) const
	{
		std::size_t s = 1;
		for (id c : children(f)) { s += tree_size(c); }
		return s;
	}

	/// Maximal nesting depth of next operators.
	std::size_t next_depth(id f) const
	{
		std::size_t d = 0;
		for (id c : children(f)) { d = std::max(d, next_depth(c)); }
		const auto op = nodes_[f].op;
		return d + ((op == ltl_op::next || op == ltl_op::weak_next) ? 1 : 0);
	}

	/// Text in the input grammar.
	std::string to_string(id f) const
	{
		const node& n = nodes_[f];
		switch (n.op) {
		case ltl_op::tt: return "true";
		case ltl_op::ff: return "false";
		case ltl_op::atom: return atoms_[n.a];
		case ltl_op::neg_atom: return "!" + atoms_[n.a];
		case ltl_op::conj: return "(" + to_string(n.a) + " & " + to_string(n.b) + ")";
		case ltl_op::disj: return "(" + to_string(n.a) + " | " + to_string(n.b) + ")";
		case ltl_op::next: return "X " + to_string(n.a);
		case ltl_op::weak_next: return "N " + to_string(n.a);
		case ltl_op::until: return "(" + to_string(n.a) + " U " + to_string(n.b) + ")";
		case ltl_op::release: return "(" + to_string(n.a) + " R " + to_string(n.b) + ")";
		}
		return "?";
	}

private:
	struct node_hash
	{
		std::size_t operator()(const node& n) const
		{
			return hash_combine(hash_combine(static_cast<std::size_t>(n.op), n.a), n.b);
		}
	};

	id intern(const node& n)
	{
		auto [it, inserted] = index_.emplace(n, static_cast<id>(nodes_.size()));
		if (inserted) { nodes_.push_back(n); }
		return it->second;
	}

	std::vector<node> nodes_;
	std::unordered_map<node, id, node_hash> index_;
	std::vector<std::string> atoms_;
	std::unordered_map<std::string, id> atom_ids_;
};

struct ltlf_formula
{
	std::shared_ptr<ltlf_store> store;
	ltlf_store::id root;

	std::string to_string() const { return store->to_string(root); }
	const ltlf_store::node& top() const { return store->at(root); }
};

namespace detail
{
class ltlf_parser
{
public:
	ltlf_parser(const std::string& text, ltlf_store& store) : text_(text), store_(store) { }

	ltlf_store::id parse()
	{
		next_token();
		auto ast = parse_implication();
		if (tok_ != token::end) { fail("unexpected '" + lexeme_ + "'"); }
		return nnf(*ast, false);
	}

private:
	enum class token { end, atom, tt, ff, lparen, rparen, bang, amp, bar, arrow, X, N, U, R, F, G };

	enum class kind { tt, ff, atom, neg, conj, disj, implies, next, weak_next, until, release, eventually, always };

	struct ast
	{
		kind k;
		std::string name;
		std::unique_ptr<ast> l, r;
	};

	using ast_ptr = std::unique_ptr<ast>;

	static ast_ptr mk(kind k, ast_ptr l = nullptr, ast_ptr r = nullptr, std::string name = {})
	{
		return std::make_unique<ast>(ast{k, std::move(name), std::move(l), std::move(r)});
	}

	[[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, 1, tok_pos_ + 1); }

	void next_token()
	{
		while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) { ++pos_; }
		tok_pos_ = pos_;
		if (pos_ >= text_.size()) {
			tok_ = token::end;
			lexeme_ = "end of input";
			return;
		}
		const char c = text_[pos_];
		if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
			std::size_t e = pos_;
			while (e < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[e])) || text_[e] == '_')) { ++e; }
			lexeme_ = text_.substr(pos_, e - pos_);
			pos_ = e;
			static const std::unordered_map<std::string, token> keywords = {
				{"true", token::tt}, {"false", token::ff}, {"X", token::X}, {"N", token::N},
				{"U", token::U}, {"R", token::R}, {"F", token::F}, {"G", token::G}};
			auto it = keywords.find(lexeme_);
			tok_ = it == keywords.end() ? token::atom : it->second;
			return;
		}
		++pos_;
		lexeme_ = std::string(1, c);
		switch (c) {
		case '(': tok_ = token::lparen; return;
		case ')': tok_ = token::rparen; return;
		case '!': tok_ = token::bang; return;
		case '&': tok_ = token::amp; return;
		case '|': tok_ = token::bar; return;
		case '-':
			if (pos_ < text_.size() && text_[pos_] == '>') {
				++pos_;
				tok_ = token::arrow;
				lexeme_ = "->";
				return;
			}
			break;
		default: break;
		}
		fail("unexpected character '" + lexeme_ + "'");
	}

	ast_ptr parse_implication()
	{
		auto lhs = parse_or();
		if (tok_ == token::arrow) {
			next_token();
			return mk(kind::implies, std::move(lhs), parse_implication());
		}
		return lhs;
	}

	ast_ptr parse_or()
	{
		auto lhs = parse_and();
		while (tok_ == token::bar) {
			next_token();
			lhs = mk(kind::disj, std::move(lhs), parse_and());
		}
		return lhs;
	}

	ast_ptr parse_and()
	{
		auto lhs = parse_binary_temporal();
		while (tok_ == token::amp) {
			next_token();
			lhs = mk(kind::conj, std::move(lhs), parse_binary_temporal());
		}
		return lhs;
	}

	ast_ptr parse_binary_temporal()
	{
		auto lhs = parse_unary();
		if (tok_ == token::U || tok_ == token::R) {
			const kind k = tok_ == token::U ? kind::until : kind::release;
			next_token();
			return mk(k, std::move(lhs), parse_binary_temporal());
		}
		return lhs;
	}

	ast_ptr parse_unary()
	{
		switch (tok_) {
		case token::bang: next_token(); return mk(kind::neg, parse_unary());
		case token::X: next_token(); return mk(kind::next, parse_unary());
		case token::N: next_token(); return mk(kind::weak_next, parse_unary());
		case token::F: next_token(); return mk(kind::eventually, parse_unary());
		case token::G: next_token(); return mk(kind::always, parse_unary());
		case token::tt: next_token(); return mk(kind::tt);
		case token::ff: next_token(); return mk(kind::ff);
		case token::atom: {
			auto a = mk(kind::atom, nullptr, nullptr, lexeme_);
			store_.atom_index(lexeme_);
			next_token();
			return a;
		}
		case token::lparen: {
			next_token();
			auto inner = parse_implication();
			if (tok_ != token::rparen) { fail("expected ')'"); }
			next_token();
			return inner;
		}
		default: fail("unexpected '" + lexeme_ + "'");
		}
	}

	/// Pushes negation to the atoms using the dualities of the connectives.
	ltlf_store::id nnf(const ast& a, bool neg)
	{
		switch (a.k) {
		case kind::tt: return neg ? store_.ff() : store_.tt();
		case kind::ff: return neg ? store_.tt() : store_.ff();
		case kind::atom: return store_.atom(a.name, neg);
		case kind::neg: return nnf(*a.l, !neg);
		case kind::conj:
			return store_.make(neg ? ltl_op::disj : ltl_op::conj, nnf(*a.l, neg), nnf(*a.r, neg));
		case kind::disj:
			return store_.make(neg ? ltl_op::conj : ltl_op::disj, nnf(*a.l, neg), nnf(*a.r, neg));
		case kind::implies:
			// a -> b == !a | b
			return store_.make(neg ? ltl_op::conj : ltl_op::disj, nnf(*a.l, !neg), nnf(*a.r, neg));
		case kind::next: return store_.make(neg ? ltl_op::weak_next : ltl_op::next, nnf(*a.l, neg));
		case kind::weak_next: return store_.make(neg ? ltl_op::next : ltl_op::weak_next, nnf(*a.l, neg));
		case kind::until:
			return store_.make(neg ? ltl_op::release : ltl_op::until, nnf(*a.l, neg), nnf(*a.r, neg));
		case kind::release:
			return store_.make(neg ? ltl_op::until : ltl_op::release, nnf(*a.l, neg), nnf(*a.r, neg));
		case kind::eventually:
			// F f == true U f;  !F f == false R !f
			return neg ? store_.make(ltl_op::release, store_.ff(), nnf(*a.l, true))
			           : store_.make(ltl_op::until, store_.tt(), nnf(*a.l, false));
		case kind::always:
			// G f == false R f;  !G f == true U !f
			return neg ? store_.make(ltl_op::until, store_.tt(), nnf(*a.l, true))
			           : store_.make(ltl_op::release, store_.ff(), nnf(*a.l, false));
		}
		return store_.ff();
	}

	const std::string& text_;
	ltlf_store& store_;
	std::size_t pos_ = 0;
	std::size_t tok_pos_ = 0;
	token tok_ = token::end;
	std::string lexeme_;
};
} // namespace detail

inline ltlf_formula parse_ltlf(const std::string& text)
{
	auto store = std::make_shared<ltlf_store>();
	detail::ltlf_parser parser(text, *store);
	const auto root = parser.parse();
	return {store, root};
}

/// Truth value of a formula on the empty trace, as used for the final
/// states of the translation.
inline bool ltlf_empty_value(const ltlf_store& st, ltlf_store::id f)
{
	const auto& n = st.at(f);
	switch (n.op) {
	case ltl_op::tt:
	case ltl_op::weak_next:
	case ltl_op::release: return true;
	case ltl_op::conj: return ltlf_empty_value(st, n.a) && ltlf_empty_value(st, n.b);
	case ltl_op::disj: return ltlf_empty_value(st, n.a) || ltlf_empty_value(st, n.b);
	default: return false;
	}
}

struct ltlf_automaton
{
	automaton<bv_algebra> afa;
	state_id more_input;       ///< accepts exactly the nonempty words
	state_id end_of_input;     ///< accepts exactly the empty word
	std::vector<std::pair<ltlf_store::id, state_id>> state_of_subformula;

	/// Configuration whose language is the set of (nonempty) traces
	/// satisfying the formula.
	pbf traces() const
	{
		auto& st = afa.store();
		return st.conj(afa.initial(), st.state(more_input));
	}
};

/// One state per distinct subformula plus the two end-of-trace helpers.  The
/// transitions of the state for f are the (guard, target) pairs of delta(f):
///   delta(p) = [(p, true)]          delta(!p) = [(!p, true)]
///   delta(a | b) = delta(a) ++ delta(b)
///   delta(a & b) = pairwise guard meets of delta(a), delta(b)
///   delta(X a) = [(T, a & more)]    delta(N a) = [(T, a | end)]
///   delta(a U b) = delta(b) | (delta(a) & (a U b))
///   delta(a R b) = delta(b) & (delta(a) | (a R b))
inline ltlf_automaton ltlf_to_afa(const ltlf_formula& phi)
{
	const ltlf_store& fs = *phi.store;
	auto alg = std::make_shared<bv_algebra>(fs.atoms());
	auto store = std::make_shared<pbf_store>();
	using guarded = std::vector<std::pair<bv_predicate, pbf>>;

	const auto subs = fs.subformulas(phi.root);
	std::unordered_map<ltlf_store::id, state_id> state_of;
	for (std::size_t i = 0; i < subs.size(); ++i) { state_of.emplace(subs[i], static_cast<state_id>(i)); }
	const auto more = static_cast<state_id>(subs.size());
	const auto end = static_cast<state_id>(subs.size() + 1);
	const std::size_t n = subs.size() + 2;

	auto product = [&](const guarded& x, const guarded& y) {
		guarded out;
		for (const auto& [g1, t1] : x) {
			for (const auto& [g2, t2] : y) {
				auto g = alg->conj(g1, g2);
				if (alg->is_sat(g)) { out.emplace_back(g, store->conj(t1, t2)); }
			}
		}
		return out;
	};
	auto concat = [](guarded x, const guarded& y) {
		x.insert(x.end(), y.begin(), y.end());
		return x;
	};

	std::unordered_map<ltlf_store::id, guarded> delta;
	for (ltlf_store::id f : subs) {
		const auto& nd = fs.at(f);
		const pbf self = store->state(state_of.at(f));
		guarded d;
		switch (nd.op) {
		case ltl_op::tt: d = {{alg->top(), pbf_store::tt}}; break;
		case ltl_op::ff: break;
		case ltl_op::atom: d = {{alg->var(nd.a), pbf_store::tt}}; break;
		case ltl_op::neg_atom: d = {{alg->negate(alg->var(nd.a)), pbf_store::tt}}; break;
		case ltl_op::conj: d = product(delta.at(nd.a), delta.at(nd.b)); break;
		case ltl_op::disj: d = concat(delta.at(nd.a), delta.at(nd.b)); break;
		case ltl_op::next:
			d = {{alg->top(), store->conj(store->state(state_of.at(nd.a)), store->state(more))}};
			break;
		case ltl_op::weak_next:
			d = {{alg->top(), store->disj(store->state(state_of.at(nd.a)), store->state(end))}};
			break;
		case ltl_op::until:
			d = concat(delta.at(nd.b), product(delta.at(nd.a), {{alg->top(), self}}));
			break;
		case ltl_op::release:
			d = product(delta.at(nd.b), concat(delta.at(nd.a), {{alg->top(), self}}));
			break;
		}
		delta.emplace(f, std::move(d));
	}

	std::vector<transition<bv_algebra>> trans;
	bitset fin(n);
	for (ltlf_store::id f : subs) {
		const state_id s = state_of.at(f);
		fin.set(s, ltlf_empty_value(fs, f));
		for (const auto& [g, t] : delta.at(f)) { trans.push_back({s, g, t}); }
	}
	trans.push_back({more, alg->top(), pbf_store::tt});
	trans.push_back({end, alg->top(), pbf_store::ff});
	fin.set(end);

	std::vector<std::pair<ltlf_store::id, state_id>> mapping(state_of.begin(), state_of.end());
	std::sort(mapping.begin(), mapping.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
	automaton<bv_algebra> afa(alg, store, n, store->state(state_of.at(phi.root)), std::move(fin), std::move(trans));
	return {std::move(afa), more, end, std::move(mapping)};
}

/// Whether a nonempty trace satisfies the formula at position 0.  Bit i of
/// a letter is the value of atom i.
inline bool ltlf_holds(const ltlf_formula& phi, std::span<const std::uint64_t> trace)
{
	if (trace.empty()) { return false; }
	const ltlf_store& fs = *phi.store;
	const auto subs = fs.subformulas(phi.root);
	const std::size_t n = trace.size();
	std::unordered_map<ltlf_store::id, std::vector<char>> val;
	for (ltlf_store::id f : subs) {
		const auto& nd = fs.at(f);
		std::vector<char> v(n + 1, 0);
		for (std::size_t i = n; i-- > 0;) {
			switch (nd.op) {
			case ltl_op::tt: v[i] = 1; break;
			case ltl_op::ff: v[i] = 0; break;
			case ltl_op::atom: v[i] = (trace[i] >> nd.a) & 1U; break;
			case ltl_op::neg_atom: v[i] = !((trace[i] >> nd.a) & 1U); break;
			case ltl_op::conj: v[i] = val[nd.a][i] && val[nd.b][i]; break;
			case ltl_op::disj: v[i] = val[nd.a][i] || val[nd.b][i]; break;
			case ltl_op::next: v[i] = i + 1 < n && val[nd.a][i + 1]; break;
			case ltl_op::weak_next: v[i] = i + 1 >= n || val[nd.a][i + 1]; break;
			case ltl_op::until: v[i] = val[nd.b][i] || (val[nd.a][i] && i + 1 < n && v[i + 1]); break;
			case ltl_op::release: v[i] = val[nd.b][i] && (val[nd.a][i] || i + 1 >= n || v[i + 1]); break;
			}
		}
		val.emplace(f, std::move(v));
	}
	return val.at(phi.root)[0];
}

/// Random NNF formula of exactly `size` tree nodes over atoms p0..p(k-1).
template <class Rng>
ltlf_formula random_ltlf(Rng& rng, std::size_t size, unsigned atoms)
{
	auto store = std::make_shared<ltlf_store>();
	std::vector<std::string> names;
	for (unsigned i = 0; i < atoms; ++i) {
		names.push_back("p" + std::to_string(i));
		store->atom_index(names.back());
	}
	auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
	std::function<ltlf_store::id(std::size_t)> gen = [&](std::size_t s) -> ltlf_store::id {
		if (s <= 1) {
			const std::size_t r = pick(atoms == 0 ? 2 : 10);
			if (atoms == 0 || r >= 8) { return r % 2 == 0 ? store->tt() : store->ff(); }
			return store->atom(names[pick(atoms)], r % 2 == 1);
		}
		if (s == 2) {
			return store->make(pick(2) == 0 ? ltl_op::next : ltl_op::weak_next, gen(1));
		}
		const std::size_t r = pick(6);
		if (r < 2) { return store->make(r == 0 ? ltl_op::next : ltl_op::weak_next, gen(s - 1)); }
		static constexpr ltl_op binary[] = {ltl_op::conj, ltl_op::disj, ltl_op::until, ltl_op::release};
		const std::size_t left = 1 + pick(s - 2);
		const auto l = gen(left);
		const auto rr = gen(s - 1 - left);
		return store->make(binary[r - 2], l, rr);
	};
	const auto root = gen(size);
	return {store, root};
}

} // namespace safa

#endif // SAFA_LTLF_HH_
