/* automaton.hh -- symbolic alternating finite automata and their language
 * operations.
 *
 * An automaton is <A, Q, p0, F, Delta> where Q = {0..n-1}, p0 is a positive
 * Boolean formula over Q, F is a set of states (also read as the model
 * Q -> 2 deciding acceptance of the empty word) and Delta is a list of
 * transitions (source, guard, target formula).  A word w is accepted from a
 * formula p iff F(Delta_w(p)) = 1.
 */

#ifndef SAFA_AUTOMATON_HH_
#define SAFA_AUTOMATON_HH_

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <safa/algebra.hh>
#include <safa/pbf.hh>

namespace safa
{

template <boolean_algebra A>
struct transition
{
	state_id source;
	typename A::predicate guard;
	pbf target;
};

template <boolean_algebra A>
class automaton
{
public:
	using algebra_type = A;
	using predicate = typename A::predicate;
	using character = typename A::character;
	using word = std::vector<character>;

	/// Validates state indices and guard ownership, drops transitions whose
	/// guard is unsatisfiable and merges transitions with the same source and
	/// target by disjoining their guards.
	automaton(std::shared_ptr<A> alg, std::shared_ptr<pbf_store> store, std::size_t state_count,
	          pbf initial, bitset final_states, std::vector<transition<A>> transitions)
		: alg_(std::move(alg)), store_(std::move(store)), n_(state_count), initial_(initial),
		  final_(std::move(final_states))
	{
		if (!alg_ || !store_) { throw usage_error("automaton needs an algebra and a formula store"); }
		if (final_.size() != n_) { throw usage_error("final-state set width differs from the state count"); }
		check_formula(initial_);
		out_.resize(n_);
		for (auto& t : transitions) {
			if (t.source >= n_) { throw usage_error("transition source out of range"); }
			check_formula(t.target);
			if (t.guard.tag() != alg_->tag()) { throw usage_error("guard belongs to a different algebra"); }
			if (!alg_->is_sat(t.guard)) { continue; }
			bool merged = false;
			for (std::size_t idx : out_[t.source]) {
				if (trans_[idx].target == t.target) {
					trans_[idx].guard = alg_->disj(trans_[idx].guard, t.guard);
					merged = true;
					break;
				}
			}
			if (!merged) {
				out_[t.source].push_back(trans_.size());
				trans_.push_back(std::move(t));
			}
		}
	}

	const std::shared_ptr<A>& algebra_ptr() const { return alg_; }
	A& algebra() const { return *alg_; }
	const std::shared_ptr<pbf_store>& store_ptr() const { return store_; }
	pbf_store& store() const { return *store_; }

	std::size_t state_count() const { return n_; }
	pbf initial() const { return initial_; }
	const bitset& final_states() const { return final_; }
	bool is_final(state_id s) const { return final_.test(s); }
	const std::vector<transition<A>>& transitions() const { return trans_; }

	/// Indices into transitions() of the transitions leaving s.
	const std::vector<std::size_t>& outgoing(state_id s) const { return out_[s]; }

	/// Set when the guards of every state are known to partition the domain.
	bool is_normal() const { return normal_; }
	void mark_normal() { normal_ = true; }

	/// Same automaton with another initial formula.
	automaton with_initial(pbf p) const
	{
		check_formula(p);
		automaton copy = *this;
		copy.initial_ = p;
		return copy;
	}

	void check_formula(pbf p) const
	{
		if (p.id() >= store_->node_count()) { throw usage_error("formula does not belong to this store"); }
		const auto& st = store_->states(p);
		if (!st.empty() && st.back() >= n_) { throw usage_error("formula mentions a state out of range"); }
	}

	void check_same_algebra(const automaton& other) const
	{
		if (alg_ != other.alg_) { throw usage_error("automata over different algebra instances"); }
	}

private:
	std::shared_ptr<A> alg_;
	std::shared_ptr<pbf_store> store_;
	std::size_t n_;
	pbf initial_;
	bitset final_;
	std::vector<transition<A>> trans_;
	std::vector<std::vector<std::size_t>> out_;
	bool normal_ = false;
};

/// Delta_a restricted to a set of states, together with the class of a in
/// the relation "same Delta on every state of S".
template <boolean_algebra A>
struct char_step
{
	std::vector<std::pair<state_id, pbf>> successors; // sorted by state
	typename A::predicate cls;

	pbf successor(state_id s) const
	{
		auto it = std::lower_bound(successors.begin(), successors.end(), s,
			[](const auto& e, state_id x) { return e.first < x; });
		if (it == successors.end() || it->first != s) { throw usage_error("state outside the step's domain"); }
		return it->second;
	}
};

/// For each s in `states` (sorted), the disjunction of targets of s-sourced
/// transitions whose guard contains a; the class predicate conjoins every
/// such guard and the negation of every s-sourced guard not containing a.
template <boolean_algebra A>
char_step<A> delta_on_char(const automaton<A>& m, typename A::character a, std::span<const state_id> states)
{
	A& alg = m.algebra();
	pbf_store& store = m.store();
	char_step<A> step{{}, alg.top()};
	step.successors.reserve(states.size());
	for (state_id s : states) {
		pbf target = pbf_store::ff;
		for (std::size_t idx : m.outgoing(s)) {
			const auto& t = m.transitions()[idx];
			if (alg.member(a, t.guard)) {
				step.cls = alg.conj(step.cls, t.guard);
				target = store.disj(target, t.target);
			} else {
				step.cls = minus(alg, step.cls, t.guard);
			}
		}
		step.successors.emplace_back(s, target);
	}
	return step;
}

/// Delta_a(p): substitutes every state of p by its successor in `step`.
template <boolean_algebra A>
pbf apply_step(const automaton<A>& m, const char_step<A>& step, pbf p)
{
	return m.store().substitute(p, [&](state_id s) { return step.successor(s); });
}

/// Delta_a(p) for a single character.
template <boolean_algebra A>
pbf delta_of(const automaton<A>& m, typename A::character a, pbf p)
{
	const auto sts = m.store().states(p);
	const auto step = delta_on_char(m, a, std::span<const state_id>(sts));
	return apply_step(m, step, p);
}

/// w in L(p) iff F(Delta_w(p)) = 1.
template <boolean_algebra A>
bool accepts_from(const automaton<A>& m, pbf p, std::span<const typename A::character> w)
{
	m.check_formula(p);
	for (auto a : w) {
		m.algebra().check_char(a);
		p = delta_of(m, a, p);
	}
	return m.store().eval(m.final_states(), p);
}

template <boolean_algebra A>
bool accepts(const automaton<A>& m, std::span<const typename A::character> w)
{
	return accepts_from(m, m.initial(), w);
}

template <boolean_algebra A>
bool accepts(const automaton<A>& m, const std::vector<typename A::character>& w)
{
	return accepts_from(m, m.initial(), std::span<const typename A::character>(w));
}

namespace detail
{
/// Copies the states of `src` into a joint automaton at offset `shift`.
template <boolean_algebra A>
pbf import_formula(pbf_store& dst, const automaton<A>& /*src*/, pbf p, state_id shift)
{
	return dst.substitute(p, [&](state_id s) { return dst.state(s + shift); });
}

/// Rebuilds a formula from another store (ids are store-local).
inline pbf copy_formula(pbf_store& dst, const pbf_store& src, pbf p, state_id shift,
                        std::unordered_map<std::uint32_t, pbf>& memo)
{
	switch (src.kind(p)) {
	case pbf_kind::ff: return pbf_store::ff;
	case pbf_kind::tt: return pbf_store::tt;
	case pbf_kind::state: return dst.state(src.state_of(p) + shift);
	default: break;
	}
	if (auto it = memo.find(p.id()); it != memo.end()) { return it->second; }
	const pbf l = copy_formula(dst, src, src.left(p), shift, memo);
	const pbf r = copy_formula(dst, src, src.right(p), shift, memo);
	const pbf out = src.kind(p) == pbf_kind::conj ? dst.conj(l, r) : dst.disj(l, r);
	memo.emplace(p.id(), out);
	return out;
}

template <boolean_algebra A>
automaton<A> combine(const automaton<A>& m1, const automaton<A>& m2, bool conjunctive)
{
	m1.check_same_algebra(m2);
	auto store = m1.store_ptr();
	const auto shift = static_cast<state_id>(m1.state_count());
	const std::size_t n = m1.state_count() + m2.state_count();

	std::unordered_map<std::uint32_t, pbf> memo;
	auto lift = [&](pbf p) {
		if (m2.store_ptr() == store) { return import_formula(*store, m2, p, shift); }
		return copy_formula(*store, m2.store(), p, shift, memo);
	};

	bitset fin(n);
	for (state_id s = 0; s < m1.state_count(); ++s) { fin.set(s, m1.is_final(s)); }
	for (state_id s = 0; s < m2.state_count(); ++s) { fin.set(s + shift, m2.is_final(s)); }

	std::vector<transition<A>> trans = m1.transitions();
	for (const auto& t : m2.transitions()) {
		trans.push_back({static_cast<state_id>(t.source + shift), t.guard, lift(t.target)});
	}
	const pbf i2 = lift(m2.initial());
	const pbf init = conjunctive ? store->conj(m1.initial(), i2) : store->disj(m1.initial(), i2);
	return automaton<A>(m1.algebra_ptr(), store, n, init, std::move(fin), std::move(trans));
}
} // namespace detail

/// Disjoint union of the state spaces; initial formula p0 | p0'.
template <boolean_algebra A>
automaton<A> union_of(const automaton<A>& m1, const automaton<A>& m2)
{
	return detail::combine(m1, m2, false);
}

/// Disjoint union of the state spaces; initial formula p0 & p0'.
template <boolean_algebra A>
automaton<A> intersection_of(const automaton<A>& m1, const automaton<A>& m2)
{
	return detail::combine(m1, m2, true);
}

/// Both automata in one state space, with each initial formula expressed
/// over the joint states.
template <boolean_algebra A>
struct joined
{
	automaton<A> result;
	pbf lhs;
	pbf rhs;
};

template <boolean_algebra A>
joined<A> join(const automaton<A>& m1, const automaton<A>& m2)
{
	automaton<A> u = detail::combine(m1, m2, false);
	const auto shift = static_cast<state_id>(m1.state_count());
	std::unordered_map<std::uint32_t, pbf> memo;
	const pbf rhs = m2.store_ptr() == u.store_ptr() ? detail::import_formula(u.store(), m2, m2.initial(), shift)
	                                                : detail::copy_formula(u.store(), m2.store(), m2.initial(), shift, memo);
	const pbf lhs = m1.initial();
	return {std::move(u), lhs, rhs};
}

/// Rewrites every state's outgoing transitions so that their guards
/// partition the domain.  Characters no original guard covers go to false.
template <boolean_algebra A>
automaton<A> normalize(const automaton<A>& m)
{
	if (m.is_normal()) { return m; }
	A& alg = m.algebra();
	pbf_store& store = m.store();
	std::vector<transition<A>> out;
	for (state_id x = 0; x < m.state_count(); ++x) {
		auto chars = alg.top();
		while (alg.is_sat(chars)) {
			const auto a = alg.witness(chars);
			pbf target = pbf_store::ff;
			auto cls = alg.top();
			for (std::size_t idx : m.outgoing(x)) {
				const auto& t = m.transitions()[idx];
				if (alg.member(a, t.guard)) {
					cls = alg.conj(cls, t.guard);
					target = store.disj(target, t.target);
				} else {
					cls = minus(alg, cls, t.guard);
				}
			}
			chars = minus(alg, chars, cls);
			out.push_back({x, cls, target});
		}
	}
	// classes sharing a target get merged by the constructor, which keeps
	// the partition property
	automaton<A> r(m.algebra_ptr(), m.store_ptr(), m.state_count(), m.initial(), m.final_states(), std::move(out));
	r.mark_normal();
	return r;
}

/// Complement by De Morganization of a normalized automaton.
template <boolean_algebra A>
automaton<A> complement(const automaton<A>& m)
{
	const automaton<A> nm = normalize(m);
	pbf_store& store = nm.store();
	bitset fin(nm.state_count());
	for (state_id s = 0; s < nm.state_count(); ++s) { fin.set(s, !nm.is_final(s)); }
	std::vector<transition<A>> trans;
	trans.reserve(nm.transitions().size());
	for (const auto& t : nm.transitions()) { trans.push_back({t.source, t.guard, store.de_morgan(t.target)}); }
	automaton<A> r(nm.algebra_ptr(), nm.store_ptr(), nm.state_count(), store.de_morgan(nm.initial()),
	               std::move(fin), std::move(trans));
	r.mark_normal();
	return r;
}

/// Result of pruning: the smaller automaton and the old -> new state map.
template <boolean_algebra A>
struct pruned
{
	automaton<A> result;
	std::vector<std::optional<state_id>> mapping;

	/// Rewrites a formula over the old states (removed states become false).
	pbf translate(pbf p) const
	{
		pbf_store& store = result.store();
		return store.substitute(p, [&](state_id s) {
			return mapping[s] ? store.state(*mapping[s]) : pbf_store::ff;
		});
	}
};

/// Removes states not reachable from the states of `roots` and states that
/// cannot lead to acceptance, in the graph with an edge s -> s' whenever s'
/// occurs in the target of an s-sourced transition.  A state leads to
/// acceptance if it is final or has a transition whose target is `true`.
template <boolean_algebra A>
pruned<A> prune_from(const automaton<A>& m, std::span<const pbf> roots)
{
	pbf_store& store = m.store();
	const std::size_t n = m.state_count();
	std::vector<std::vector<state_id>> succ(n), pred(n);
	std::vector<char> accepting(n, 0);
	for (const auto& t : m.transitions()) {
		if (t.target == pbf_store::tt) { accepting[t.source] = 1; }
		for (state_id s2 : store.states(t.target)) {
			succ[t.source].push_back(s2);
			pred[s2].push_back(t.source);
		}
	}

	auto search = [n](std::vector<state_id> frontier, const std::vector<std::vector<state_id>>& edges) {
		std::vector<char> seen(n, 0);
		for (state_id s : frontier) { seen[s] = 1; }
		while (!frontier.empty()) {
			const state_id s = frontier.back();
			frontier.pop_back();
			for (state_id s2 : edges[s]) {
				if (!seen[s2]) {
					seen[s2] = 1;
					frontier.push_back(s2);
				}
			}
		}
		return seen;
	};

	std::vector<state_id> from_roots;
	for (pbf r : roots) {
		for (state_id s : store.states(r)) { from_roots.push_back(s); }
	}
	std::vector<state_id> goals;
	for (state_id s = 0; s < n; ++s) {
		if (m.is_final(s) || accepting[s]) { goals.push_back(s); }
	}
	const auto reach = search(std::move(from_roots), succ);
	const auto coreach = search(std::move(goals), pred);

	std::vector<std::optional<state_id>> mapping(n);
	state_id next = 0;
	for (state_id s = 0; s < n; ++s) {
		if (reach[s] && coreach[s]) { mapping[s] = next++; }
	}
	auto rename = [&](pbf p) {
		return store.substitute(p, [&](state_id s) {
			return mapping[s] ? store.state(*mapping[s]) : pbf_store::ff;
		});
	};

	bitset fin(next);
	for (state_id s = 0; s < n; ++s) {
		if (mapping[s]) { fin.set(*mapping[s], m.is_final(s)); }
	}
	std::vector<transition<A>> trans;
	for (const auto& t : m.transitions()) {
		if (!mapping[t.source]) { continue; }
		trans.push_back({*mapping[t.source], t.guard, rename(t.target)});
	}
	automaton<A> r(m.algebra_ptr(), m.store_ptr(), next, rename(m.initial()), std::move(fin), std::move(trans));
	return {std::move(r), std::move(mapping)};
}

template <boolean_algebra A>
automaton<A> prune(const automaton<A>& m)
{
	const pbf roots[] = {m.initial()};
	return prune_from(m, std::span<const pbf>(roots)).result;
}

/// Names the reverse-language construction for engine selection; the
/// automaton itself is handed unchanged to the reverse-DFA builder.
template <boolean_algebra A>
const automaton<A>& reverse(const automaton<A>& m)
{
	return m;
}

} // namespace safa

#endif // SAFA_AUTOMATON_HH_
