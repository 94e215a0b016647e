/* sfa.hh -- non-alternating symbolic finite automata: product,
 * determinization and Hopcroft-Karp equivalence.
 */

#ifndef SAFA_SFA_HH_
#define SAFA_SFA_HH_

#include <chrono>
#include <deque>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <vector>

#include <safa/automaton.hh>

namespace safa
{

template <boolean_algebra A>
class sfa
{
public:
	using predicate = typename A::predicate;
	using character = typename A::character;

	struct edge
	{
		state_id source;
		predicate guard;
		state_id target;
	};

	sfa(std::shared_ptr<A> alg, std::size_t state_count, std::vector<state_id> initial, bitset final_states,
	    std::vector<edge> edges, bool deterministic = false)
		: alg_(std::move(alg)), n_(state_count), initial_(std::move(initial)), final_(std::move(final_states)),
		  deterministic_(deterministic)
	{
		if (final_.size() != n_) { throw usage_error("final-state set width differs from the state count"); }
		std::sort(initial_.begin(), initial_.end());
		initial_.erase(std::unique(initial_.begin(), initial_.end()), initial_.end());
		for (state_id s : initial_) {
			if (s >= n_) { throw usage_error("initial state out of range"); }
		}
		out_.resize(n_);
		for (auto& e : edges) {
			if (e.source >= n_ || e.target >= n_) { throw usage_error("s-FA edge endpoint out of range"); }
			if (e.guard.tag() != alg_->tag()) { throw usage_error("guard belongs to a different algebra"); }
			if (!alg_->is_sat(e.guard)) { continue; }
			bool merged = false;
			for (std::size_t idx : out_[e.source]) {
				if (edges_[idx].target == e.target) {
					edges_[idx].guard = alg_->disj(edges_[idx].guard, e.guard);
					merged = true;
					break;
				}
			}
			if (!merged) {
				out_[e.source].push_back(edges_.size());
				edges_.push_back(std::move(e));
			}
		}
		if (deterministic_) {
			if (initial_.size() != 1) { throw usage_error("deterministic s-FA needs exactly one initial state"); }
			for (state_id s = 0; s < n_; ++s) {
				const auto& o = out_[s];
				for (std::size_t i = 0; i < o.size(); ++i) {
					for (std::size_t j = i + 1; j < o.size(); ++j) {
						if (alg_->is_sat(alg_->conj(edges_[o[i]].guard, edges_[o[j]].guard))) {
							throw usage_error("deterministic s-FA with overlapping guards");
						}
					}
				}
			}
		}
	}

	const std::shared_ptr<A>& algebra_ptr() const { return alg_; }
	A& algebra() const { return *alg_; }
	std::size_t state_count() const { return n_; }
	const std::vector<state_id>& initial() const { return initial_; }
	const bitset& final_states() const { return final_; }
	bool is_final(state_id s) const { return final_.test(s); }
	const std::vector<edge>& edges() const { return edges_; }
	const std::vector<std::size_t>& outgoing(state_id s) const { return out_[s]; }
	bool is_deterministic() const { return deterministic_; }

	void check_same_algebra(const sfa& other) const
	{
		if (alg_ != other.alg_) { throw usage_error("s-FAs over different algebra instances"); }
	}

private:
	std::shared_ptr<A> alg_;
	std::size_t n_;
	std::vector<state_id> initial_;
	bitset final_;
	std::vector<edge> edges_;
	std::vector<std::vector<std::size_t>> out_;
	bool deterministic_;
};

template <boolean_algebra A>
bool sfa_accepts(const sfa<A>& a, std::span<const typename A::character> w)
{
	std::vector<char> cur(a.state_count(), 0);
	for (state_id s : a.initial()) { cur[s] = 1; }
	for (auto c : w) {
		a.algebra().check_char(c);
		std::vector<char> next(a.state_count(), 0);
		for (const auto& e : a.edges()) {
			if (cur[e.source] && a.algebra().member(c, e.guard)) { next[e.target] = 1; }
		}
		cur = std::move(next);
	}
	for (state_id s = 0; s < a.state_count(); ++s) {
		if (cur[s] && a.is_final(s)) { return true; }
	}
	return false;
}

template <boolean_algebra A>
bool sfa_accepts(const sfa<A>& a, const std::vector<typename A::character>& w)
{
	return sfa_accepts(a, std::span<const typename A::character>(w));
}

/// Product automaton over the pairs reachable from the initial pairs; edges
/// carry guard conjunctions and unsatisfiable ones are dropped.
template <boolean_algebra A>
sfa<A> sfa_intersect(const sfa<A>& a, const sfa<A>& b, const deadline& limit = deadline::never())
{
	a.check_same_algebra(b);
	A& alg = a.algebra();
	std::map<std::pair<state_id, state_id>, state_id> index;
	std::vector<std::pair<state_id, state_id>> pairs;
	std::vector<typename sfa<A>::edge> edges;
	auto intern = [&](state_id x, state_id y) {
		auto [it, inserted] = index.emplace(std::make_pair(x, y), static_cast<state_id>(pairs.size()));
		if (inserted) { pairs.emplace_back(x, y); }
		return it->second;
	};
	std::vector<state_id> init;
	for (state_id x : a.initial()) {
		for (state_id y : b.initial()) { init.push_back(intern(x, y)); }
	}
	for (std::size_t k = 0; k < pairs.size(); ++k) {
		limit.check();
		const auto [x, y] = pairs[k];
		for (std::size_t i : a.outgoing(x)) {
			for (std::size_t j : b.outgoing(y)) {
				const auto& ea = a.edges()[i];
				const auto& eb = b.edges()[j];
				auto g = alg.conj(ea.guard, eb.guard);
				if (!alg.is_sat(g)) { continue; }
				const state_id t = intern(ea.target, eb.target);
				edges.push_back({static_cast<state_id>(k), std::move(g), t});
			}
		}
	}
	bitset fin(pairs.size());
	for (std::size_t k = 0; k < pairs.size(); ++k) {
		fin.set(k, a.is_final(pairs[k].first) && b.is_final(pairs[k].second));
	}
	return sfa<A>(a.algebra_ptr(), pairs.size(), std::move(init), std::move(fin), std::move(edges));
}

/// Subset construction with minterm-based character classes.  The result is
/// complete: the empty subset is an ordinary (rejecting) sink state.
template <boolean_algebra A>
sfa<A> determinize(const sfa<A>& a, const deadline& limit = deadline::never())
{
	A& alg = a.algebra();
	std::map<std::vector<state_id>, state_id> index;
	std::vector<std::vector<state_id>> subsets;
	std::vector<typename sfa<A>::edge> edges;
	auto intern = [&](std::vector<state_id> s) {
		auto [it, inserted] = index.emplace(s, static_cast<state_id>(subsets.size()));
		if (inserted) { subsets.push_back(std::move(s)); }
		return it->second;
	};
	intern(a.initial());
	for (std::size_t k = 0; k < subsets.size(); ++k) {
		limit.check();
		const std::vector<state_id> cur = subsets[k];
		auto chars = alg.top();
		while (alg.is_sat(chars)) {
			const auto c = alg.witness(chars);
			auto cls = alg.top();
			std::vector<state_id> target;
			for (state_id s : cur) {
				for (std::size_t idx : a.outgoing(s)) {
					const auto& e = a.edges()[idx];
					if (alg.member(c, e.guard)) {
						cls = alg.conj(cls, e.guard);
						target.push_back(e.target);
					} else {
						cls = minus(alg, cls, e.guard);
					}
				}
			}
			std::sort(target.begin(), target.end());
			target.erase(std::unique(target.begin(), target.end()), target.end());
			chars = minus(alg, chars, cls);
			const state_id t = intern(std::move(target));
			edges.push_back({static_cast<state_id>(k), std::move(cls), t});
		}
	}
	bitset fin(subsets.size());
	for (std::size_t k = 0; k < subsets.size(); ++k) {
		fin.set(k, std::any_of(subsets[k].begin(), subsets[k].end(), [&](state_id s) { return a.is_final(s); }));
	}
	return sfa<A>(a.algebra_ptr(), subsets.size(), {0}, std::move(fin), std::move(edges), true);
}

template <boolean_algebra A>
struct sfa_equiv_result
{
	bool equivalent = false;
	bool timed_out = false;
	std::optional<std::vector<typename A::character>> counterexample;
	std::size_t states_explored = 0;   ///< determinized states of both sides
	std::size_t pairs_merged = 0;
	double wall_ms = 0.0;
};

/// L(a) = L(b): determinize both, then Hopcroft-Karp union-find merging.
template <boolean_algebra A>
sfa_equiv_result<A> sfa_equiv(const sfa<A>& a, const sfa<A>& b, const deadline& limit = deadline::never())
{
	using character = typename A::character;
	a.check_same_algebra(b);
	const auto start = std::chrono::steady_clock::now();
	sfa_equiv_result<A> res;
	try {
		const sfa<A> da = a.is_deterministic() ? a : determinize(a, limit);
		const sfa<A> db = b.is_deterministic() ? b : determinize(b, limit);
		res.states_explored = da.state_count() + db.state_count();
		A& alg = a.algebra();
		const auto shift = static_cast<state_id>(da.state_count());
		std::vector<state_id> uf(da.state_count() + db.state_count());
		std::iota(uf.begin(), uf.end(), 0);
		auto find = [&](state_id x) {
			while (uf[x] != x) {
				uf[x] = uf[uf[x]];
				x = uf[x];
			}
			return x;
		};
		// a deterministic s-FA may be partial; a missing edge means rejection
		auto step = [&](const sfa<A>& d, state_id s, character c) -> std::optional<std::pair<state_id, typename A::predicate>> {
			for (std::size_t idx : d.outgoing(s)) {
				const auto& e = d.edges()[idx];
				if (alg.member(c, e.guard)) { return std::make_pair(e.target, e.guard); }
			}
			return std::nullopt;
		};
		struct work
		{
			std::optional<state_id> s, t; // nullopt = implicit dead state
			long word;
		};
		std::vector<std::pair<long, character>> words;
		std::deque<work> queue{{da.initial()[0], db.initial()[0], -1}};
		const state_id dead_a = static_cast<state_id>(-1);
		std::map<std::pair<state_id, state_id>, bool> dead_pairs;
		bool done = false;
		while (!queue.empty() && !done) {
			limit.check();
			const work w = queue.front();
			queue.pop_front();
			const bool fa = w.s && da.is_final(*w.s);
			const bool fb = w.t && db.is_final(*w.t);
			if (w.s && w.t) {
				const state_id x = find(*w.s), y = find(*w.t + shift);
				if (x == y) { continue; }
				if (fa != fb) {
					std::vector<character> word;
					for (long k = w.word; k >= 0; k = words[static_cast<std::size_t>(k)].first) {
						word.push_back(words[static_cast<std::size_t>(k)].second);
					}
					std::reverse(word.begin(), word.end());
					res.counterexample = std::move(word);
					done = true;
					break;
				}
				uf[x] = y;
			} else {
				if (!w.s && !w.t) { continue; }
				const auto key = std::make_pair(w.s ? *w.s : dead_a, w.t ? *w.t + shift : dead_a);
				if (!dead_pairs.emplace(key, true).second) { continue; }
				if (fa != fb) {
					std::vector<character> word;
					for (long k = w.word; k >= 0; k = words[static_cast<std::size_t>(k)].first) {
						word.push_back(words[static_cast<std::size_t>(k)].second);
					}
					std::reverse(word.begin(), word.end());
					res.counterexample = std::move(word);
					done = true;
					break;
				}
			}
			++res.pairs_merged;
			auto chars = alg.top();
			while (alg.is_sat(chars)) {
				const character c = alg.witness(chars);
				auto cls = alg.top();
				std::optional<state_id> s2, t2;
				if (w.s) {
					if (auto r = step(da, *w.s, c)) {
						s2 = r->first;
						cls = alg.conj(cls, r->second);
					} else {
						for (std::size_t idx : da.outgoing(*w.s)) { cls = minus(alg, cls, da.edges()[idx].guard); }
					}
				}
				if (w.t) {
					if (auto r = step(db, *w.t, c)) {
						t2 = r->first;
						cls = alg.conj(cls, r->second);
					} else {
						for (std::size_t idx : db.outgoing(*w.t)) { cls = minus(alg, cls, db.edges()[idx].guard); }
					}
				}
				chars = minus(alg, chars, cls);
				words.emplace_back(w.word, c);
				queue.push_back({s2, t2, static_cast<long>(words.size()) - 1});
			}
		}
		res.equivalent = !res.counterexample.has_value();
	} catch (const timeout_error&) {
		res.timed_out = true;
	}
	res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
	return res;
}

/// The s-AFA with the same language: every edge target becomes a single
/// state formula and the initial formula is the disjunction of the initial
/// states.
template <boolean_algebra A>
automaton<A> to_afa(const sfa<A>& a, std::shared_ptr<pbf_store> store = nullptr)
{
	if (!store) { store = std::make_shared<pbf_store>(); }
	std::vector<transition<A>> trans;
	trans.reserve(a.edges().size());
	for (const auto& e : a.edges()) { trans.push_back({e.source, e.guard, store->state(e.target)}); }
	pbf init = pbf_store::ff;
	for (state_id s : a.initial()) { init = store->disj(init, store->state(s)); }
	return automaton<A>(a.algebra_ptr(), store, a.state_count(), init, a.final_states(), std::move(trans));
}

/// The s-FA view of configuration `config` when every transition target is
/// a single state (or false) and `config` is a disjunction of states (or
/// false); nullopt otherwise.
template <boolean_algebra A>
std::optional<sfa<A>> as_sfa(const automaton<A>& m, pbf config)
{
	pbf_store& store = m.store();
	std::vector<state_id> init;
	std::vector<pbf> stack{config};
	while (!stack.empty()) {
		const pbf p = stack.back();
		stack.pop_back();
		switch (store.kind(p)) {
		case pbf_kind::ff: break;
		case pbf_kind::state: init.push_back(store.state_of(p)); break;
		case pbf_kind::disj:
			stack.push_back(store.left(p));
			stack.push_back(store.right(p));
			break;
		default: return std::nullopt;
		}
	}
	std::vector<typename sfa<A>::edge> edges;
	for (const auto& t : m.transitions()) {
		if (t.target == pbf_store::ff) { continue; }
		if (store.kind(t.target) == pbf_kind::state) {
			edges.push_back({t.source, t.guard, store.state_of(t.target)});
		} else if (store.kind(t.target) == pbf_kind::disj) {
			// x -> s1 | s2 is two nondeterministic edges
			std::vector<pbf> parts{t.target};
			while (!parts.empty()) {
				const pbf p = parts.back();
				parts.pop_back();
				if (store.kind(p) == pbf_kind::state) {
					edges.push_back({t.source, t.guard, store.state_of(p)});
				} else if (store.kind(p) == pbf_kind::disj) {
					parts.push_back(store.left(p));
					parts.push_back(store.right(p));
				} else {
					return std::nullopt;
				}
			}
		} else {
			return std::nullopt;
		}
	}
	return sfa<A>(m.algebra_ptr(), m.state_count(), std::move(init), m.final_states(), std::move(edges));
}

} // namespace safa

#endif // SAFA_SFA_HH_
