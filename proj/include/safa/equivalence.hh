/* equivalence.hh -- language equivalence of two configurations of an s-AFA
 * by bisimulation up to congruence.
 *
 * The search maintains a relation R (asserted into a congruence_context) and
 * a worklist of pairs whose successors still have to be checked.  For each
 * pair (p, q) it enumerates one representative character per class of
 * "same successors on every state of p and q", checks that the successors
 * agree on F, and adds the successor pair to R unless it is already
 * congruent modulo R.  Pairs are processed smallest |p|+|q| first.
 */

#ifndef SAFA_EQUIVALENCE_HH_
#define SAFA_EQUIVALENCE_HH_

#include <chrono>
#include <optional>
#include <queue>
#include <vector>

#include <safa/automaton.hh>
#include <safa/congruence.hh>

namespace safa
{

struct equiv_stats
{
	std::size_t pairs_explored = 0;     ///< pairs ever inserted into the worklist
	std::size_t sat_queries = 0;
	std::size_t representatives = 0;    ///< representative characters enumerated
	double wall_ms = 0.0;
};

template <boolean_algebra A>
struct equiv_result
{
	bool equivalent = false;
	bool timed_out = false;
	/// Present iff the configurations are distinguished; accepted from
	/// exactly one of them.
	std::optional<std::vector<typename A::character>> counterexample;
	equiv_stats stats;
};

/// Step-by-step record of a run, for inspection and tests.
template <boolean_algebra A>
struct equiv_trace
{
	struct representative
	{
		typename A::character witness;
		typename A::predicate cls;
		pbf lhs;
		pbf rhs;
		bool congruent;
	};

	struct step
	{
		pbf lhs;
		pbf rhs;
		std::vector<representative> representatives;
	};

	std::vector<step> steps;
	std::vector<std::pair<pbf, pbf>> relation;
};

struct equiv_options
{
	deadline limit = deadline::never();
	/// Remove useless states (w.r.t. the two configurations) first.
	bool prune = true;
};

namespace detail
{
inline std::vector<state_id> merge_states(const std::vector<state_id>& a, const std::vector<state_id>& b)
{
	std::vector<state_id> out;
	out.reserve(a.size() + b.size());
	std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
	return out;
}

template <boolean_algebra A>
equiv_result<A> bisimulate(const automaton<A>& m, pbf p0, pbf q0, const deadline& limit, equiv_trace<A>* trace)
{
	using character = typename A::character;
	A& alg = m.algebra();
	pbf_store& store = m.store();
	const bitset& fin = m.final_states();

	equiv_result<A> res;
	struct word_node
	{
		long parent;
		character c;
	};
	std::vector<word_node> words;
	auto word_of = [&](long node, std::optional<character> last) {
		std::vector<character> w;
		if (last) { w.push_back(*last); }
		for (long k = node; k >= 0; k = words[static_cast<std::size_t>(k)].parent) {
			w.push_back(words[static_cast<std::size_t>(k)].c);
		}
		std::reverse(w.begin(), w.end());
		return w;
	};

	struct item
	{
		std::size_t priority;
		std::uint64_t seq;
		pbf p;
		pbf q;
		long word;

		bool operator>(const item& o) const
		{
			return priority != o.priority ? priority > o.priority : seq > o.seq;
		}
	};
	std::priority_queue<item, std::vector<item>, std::greater<item>> worklist;
	std::uint64_t seq = 0;

	congruence_context ctx(store);
	auto push = [&](pbf p, pbf q, long word) {
		ctx.assert_pair(p, q);
		if (trace) { trace->relation.emplace_back(p, q); }
		worklist.push({store.size(p) + store.size(q), seq++, p, q, word});
		++res.stats.pairs_explored;
	};

	auto finish = [&](bool eq, std::optional<std::vector<character>> cex) {
		res.equivalent = eq;
		res.counterexample = std::move(cex);
		res.stats.sat_queries = ctx.query_count();
		return res;
	};

	if (store.eval(fin, p0) != store.eval(fin, q0)) { return finish(false, std::vector<character>{}); }
	push(p0, q0, -1);

	try {
		while (!worklist.empty()) {
			limit.check();
			const item cur = worklist.top();
			worklist.pop();
			const auto sts = merge_states(store.states(cur.p), store.states(cur.q));
			if (trace) { trace->steps.push_back({cur.p, cur.q, {}}); }

			auto chars = alg.top();
			while (alg.is_sat(chars)) {
				const character a = alg.witness(chars);
				++res.stats.representatives;
				const auto step = delta_on_char(m, a, std::span<const state_id>(sts));
				const pbf p1 = apply_step(m, step, cur.p);
				const pbf q1 = apply_step(m, step, cur.q);
				chars = minus(alg, chars, step.cls);

				if (store.eval(fin, p1) != store.eval(fin, q1)) {
					if (trace) { trace->steps.back().representatives.push_back({a, step.cls, p1, q1, false}); }
					res.stats.sat_queries = ctx.query_count();
					return finish(false, word_of(cur.word, a));
				}
				const bool congruent = ctx.in_closure(p1, q1);
				if (trace) { trace->steps.back().representatives.push_back({a, step.cls, p1, q1, congruent}); }
				if (!congruent) {
					words.push_back({cur.word, a});
					push(p1, q1, static_cast<long>(words.size()) - 1);
				}
				limit.check();
			}
		}
	} catch (const timeout_error&) {
		res.timed_out = true;
		return finish(false, std::nullopt);
	}
	return finish(true, std::nullopt);
}
} // namespace detail

/// Decides L(p0) = L(q0) for two configurations of the same automaton.
template <boolean_algebra A>
equiv_result<A> is_equivalent(const automaton<A>& m, pbf p0, pbf q0, const equiv_options& opts = {},
                              equiv_trace<A>* trace = nullptr)
{
	const auto start = std::chrono::steady_clock::now();
	m.check_formula(p0);
	m.check_formula(q0);
	equiv_result<A> res;
	if (opts.prune) {
		const pbf roots[] = {p0, q0};
		const auto pr = prune_from(m, std::span<const pbf>(roots));
		res = detail::bisimulate(pr.result, pr.translate(p0), pr.translate(q0), opts.limit, trace);
	} else {
		res = detail::bisimulate(m, p0, q0, opts.limit, trace);
	}
	res.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
	return res;
}

/// Two configurations of one automaton, e.g. conjunctions of the initial
/// states of several component automata.
template <boolean_algebra A>
equiv_result<A> config_equiv(const automaton<A>& m, pbf lhs, pbf rhs, const equiv_options& opts = {},
                             equiv_trace<A>* trace = nullptr)
{
	return is_equivalent(m, lhs, rhs, opts, trace);
}

/// L(M) is empty iff its initial formula is equivalent to false.  The
/// counterexample, if any, is an accepted word.
template <boolean_algebra A>
equiv_result<A> is_empty(const automaton<A>& m, const equiv_options& opts = {})
{
	return is_equivalent(m, m.initial(), pbf_store::ff, opts);
}

} // namespace safa

#endif // SAFA_EQUIVALENCE_HH_
