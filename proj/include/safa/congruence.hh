/* congruence.hh -- congruence closure of a relation on positive Boolean
 * formulas, decided through its logical closure.
 *
 * For R = {(p1,q1),...,(pn,qn)}, p and q are congruent modulo R iff every
 * model of (p1 <=> q1) & ... & (pn <=> qn) also satisfies p <=> q.  The
 * context keeps that conjunction in an incremental SAT solver; formulas are
 * Tseitin-encoded over the shared DAG with one variable per node.  Models
 * found by earlier queries are kept while they satisfy every asserted pair;
 * one that separates p and q answers a query without the solver.
 */

#ifndef SAFA_CONGRUENCE_HH_
#define SAFA_CONGRUENCE_HH_

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

#include <safa/pbf.hh>
#include <safa/sat.hh>

namespace safa
{

class congruence_context
{
public:
	explicit congruence_context(pbf_store& store) : store_(store)
	{
		true_var_ = solver_.new_var();
		solver_.add_clause({sat_lit(true_var_, false)});
	}

	/// Conjoins p <=> q to the context.
	void assert_pair(pbf p, pbf q)
	{
		++pairs_;
		if (p == q) { return; }
		const int a = encode(p);
		const int b = encode(q);
		solver_.add_clause({sat_lit(a, true), sat_lit(b, false)});
		solver_.add_clause({sat_lit(a, false), sat_lit(b, true)});
		widen_models();
		std::erase_if(models_, [&](const bitset& g) { return store_.eval(g, p) != store_.eval(g, q); });
	}

	/// True iff p and q are congruent modulo the asserted pairs.  Identical
	/// formulas are answered without consulting the solver.
	bool in_closure(pbf p, pbf q)
	{
		if (p == q) { return true; }
		++queries_;
		const int d = difference_var(p, q);
		widen_models();
		for (const auto& g : models_) {
			if (store_.eval(g, p) != store_.eval(g, q)) { return false; }
		}
		++solver_calls_;
		const sat_lit assume[] = {sat_lit(d, false)};
		if (solver_.solve(std::span<const sat_lit>(assume))) {
			remember_model();
			return false;
		}
		return true;
	}

	std::size_t pair_count() const { return pairs_; }
	std::size_t query_count() const { return queries_; }
	std::size_t solver_calls() const { return solver_calls_; }
	std::size_t variable_count() const { return static_cast<std::size_t>(solver_.var_count()); }

private:
	/// Variable equivalent to the formula (both Tseitin directions).
	int encode(pbf root)
	{
		if (auto it = var_of_.find(root.id()); it != var_of_.end()) { return it->second; }
		std::vector<std::pair<pbf, bool>> stack{{root, false}};
		while (!stack.empty()) {
			auto [p, expanded] = stack.back();
			stack.pop_back();
			if (var_of_.count(p.id()) != 0) { continue; }
			switch (store_.kind(p)) {
			case pbf_kind::tt: var_of_.emplace(p.id(), true_var_); continue;
			case pbf_kind::ff: var_of_.emplace(p.id(), false_var()); continue;
			case pbf_kind::state: {
				const int v = solver_.new_var();
				var_of_.emplace(p.id(), v);
				state_vars_.emplace_back(store_.state_of(p), v);
				width_ = std::max<std::size_t>(width_, store_.state_of(p) + 1);
				continue;
			}
			default: break;
			}
			const pbf l = store_.left(p), r = store_.right(p);
			if (!expanded) {
				stack.push_back({p, true});
				if (var_of_.count(l.id()) == 0) { stack.push_back({l, false}); }
				if (var_of_.count(r.id()) == 0) { stack.push_back({r, false}); }
				continue;
			}
			const int x = solver_.new_var();
			const int a = var_of_.at(l.id());
			const int b = var_of_.at(r.id());
			if (store_.kind(p) == pbf_kind::conj) {
				// x <=> a & b
				solver_.add_clause({sat_lit(x, true), sat_lit(a, false)});
				solver_.add_clause({sat_lit(x, true), sat_lit(b, false)});
				solver_.add_clause({sat_lit(x, false), sat_lit(a, true), sat_lit(b, true)});
			} else {
				// x <=> a | b
				solver_.add_clause({sat_lit(x, false), sat_lit(a, true)});
				solver_.add_clause({sat_lit(x, false), sat_lit(b, true)});
				solver_.add_clause({sat_lit(x, true), sat_lit(a, false), sat_lit(b, false)});
			}
			var_of_.emplace(p.id(), x);
		}
		return var_of_.at(root.id());
	}

	// states outside the context are unconstrained and read as false
	void remember_model()
	{
		bitset g(width_);
		for (auto [s, v] : state_vars_) { g.set(s, solver_.model_value(v)); }
		if (models_.size() == max_models) { models_.erase(models_.begin()); }
		models_.push_back(std::move(g));
	}

	void widen_models()
	{
		for (auto& g : models_) {
			if (g.size() >= width_) { continue; }
			bitset w(width_);
			for (std::size_t i = 0; i < g.size(); ++i) { w.set(i, g.test(i)); }
			g = std::move(w);
		}
	}

	int false_var()
	{
		if (false_var_ < 0) {
			false_var_ = solver_.new_var();
			solver_.add_clause({sat_lit(false_var_, true)});
		}
		return false_var_;
	}

	/// Variable d with d <=> (p xor q); assuming d asks for a model of the
	/// context that separates p and q.
	int difference_var(pbf p, pbf q)
	{
		if (q < p) { std::swap(p, q); }
		const std::uint64_t key = (static_cast<std::uint64_t>(p.id()) << 32) | q.id();
		if (auto it = diff_of_.find(key); it != diff_of_.end()) { return it->second; }
		const int a = encode(p);
		const int b = encode(q);
		const int d = solver_.new_var();
		solver_.add_clause({sat_lit(d, true), sat_lit(a, false), sat_lit(b, false)});
		solver_.add_clause({sat_lit(d, true), sat_lit(a, true), sat_lit(b, true)});
		solver_.add_clause({sat_lit(d, false), sat_lit(a, true), sat_lit(b, false)});
		solver_.add_clause({sat_lit(d, false), sat_lit(a, false), sat_lit(b, true)});
		diff_of_.emplace(key, d);
		return d;
	}

	pbf_store& store_;
	sat_solver solver_;
	int true_var_ = -1;
	int false_var_ = -1;
	std::unordered_map<std::uint32_t, int> var_of_;
	std::unordered_map<std::uint64_t, int> diff_of_;
	std::vector<std::pair<state_id, int>> state_vars_;
	std::size_t width_ = 0;
	static constexpr std::size_t max_models = 32;
	std::vector<bitset> models_;
	std::size_t pairs_ = 0;
	std::size_t queries_ = 0;
	std::size_t solver_calls_ = 0;
};

/// CNF in DIMACS convention: variables 1..n, literal -v is the negation.
struct cnf_formula
{
	int variables = 0;
	std::vector<std::vector<int>> clauses;
};

/// The CONGRUENCE instance encoding a CNF: one state per variable p and one
/// per its complement p', pairs (p & p', false) and (p | p', true), and the
/// CNF with negative literals replaced by the complement states.
struct congruence_instance
{
	std::shared_ptr<pbf_store> store;
	std::vector<std::pair<pbf, pbf>> relation;
	pbf formula;
};

inline congruence_instance sat_to_congruence(const cnf_formula& cnf)
{
	congruence_instance inst{std::make_shared<pbf_store>(), {}, pbf_store::tt};
	pbf_store& st = *inst.store;
	const auto n = static_cast<state_id>(cnf.variables);
	for (state_id v = 0; v < n; ++v) {
		const pbf pos = st.state(v), neg = st.state(v + n);
		inst.relation.emplace_back(st.conj(pos, neg), pbf_store::ff);
		inst.relation.emplace_back(st.disj(pos, neg), pbf_store::tt);
	}
	for (const auto& clause : cnf.clauses) {
		pbf c = pbf_store::ff;
		for (int lit : clause) {
			if (lit == 0 || std::abs(lit) > cnf.variables) { throw usage_error("CNF literal out of range"); }
			const auto v = static_cast<state_id>(std::abs(lit) - 1);
			c = st.disj(c, st.state(lit > 0 ? v : v + n));
		}
		inst.formula = st.conj(inst.formula, c);
	}
	return inst;
}

/// Satisfiability of a CNF decided as non-congruence of its encoding with
/// false.
inline bool satisfiable_by_congruence(const cnf_formula& cnf)
{
	const auto inst = sat_to_congruence(cnf);
	congruence_context ctx(*inst.store);
	for (const auto& [p, q] : inst.relation) { ctx.assert_pair(p, q); }
	return !ctx.in_closure(inst.formula, pbf_store::ff);
}

} // namespace safa

#endif // SAFA_CONGRUENCE_HH_
