/* reverse_dfa.hh -- deterministic automaton for the reverse language of an
 * s-AFA, explored lazily.
 *
 * States are models g : Q -> 2.  The initial state is F; reading a maps g to
 * x -> g(Delta_a(x)).  After reading a1..an the model g satisfies
 * g(p) = 1 iff an..a1 is accepted from p, so L(p) is empty iff no reachable
 * model satisfies p, and L(p) = L(q) iff every reachable model gives p and q
 * the same value.
 */

#ifndef SAFA_REVERSE_DFA_HH_
#define SAFA_REVERSE_DFA_HH_

#include <chrono>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include <safa/automaton.hh>

namespace safa
{

template <boolean_algebra A>
class reverse_dfa
{
public:
	using predicate = typename A::predicate;
	using character = typename A::character;

	explicit reverse_dfa(const automaton<A>& m) : m_(m)
	{
		intern(m_.final_states());
	}

	const automaton<A>& source() const { return m_; }

	std::size_t initial() const { return 0; }
	std::size_t state_count() const { return models_.size(); }
	const bitset& model(std::size_t id) const { return models_[id]; }

	/// Value of a configuration in the model of state `id`.
	bool value(std::size_t id, pbf p) const { return m_.store().eval(models_[id], p); }

	struct edge
	{
		std::size_t cls;   ///< index into class_predicate
		character witness;
		std::size_t target;
	};

	/// One edge per class of characters with equal Delta on all states.  The
	/// span is valid until the next call.
	std::span<const edge> successors(std::size_t id)
	{
		if (succ_.size() < models_.size()) { succ_.resize(models_.size(), not_done); }
		if (succ_[id] == not_done) {
			compute_classes();
			succ_[id] = edges_.size();
			const std::size_t n = m_.state_count();
			for (std::size_t c = 0; c < classes_.size(); ++c) {
				bitset next(n);
				for (state_id x = 0; x < n; ++x) { next.set(x, m_.store().eval(models_[id], classes_[c].delta[x])); }
				const std::size_t target = intern(std::move(next));
				edges_.push_back({c, classes_[c].witness, target});
			}
		}
		return {edges_.data() + succ_[id], classes_.size()};
	}

	/// Materializes every reachable state.
	void explore_all(const deadline& limit = deadline::never())
	{
		for (std::size_t id = 0; id < models_.size(); ++id) {
			limit.check();
			successors(id);
		}
	}

	std::size_t class_count()
	{
		compute_classes();
		return classes_.size();
	}

	const predicate& class_predicate(std::size_t c) const { return classes_[c].cls; }

private:
	static constexpr std::size_t not_done = static_cast<std::size_t>(-1);
	static constexpr std::size_t empty_slot = static_cast<std::size_t>(-1);

	struct char_class
	{
		predicate cls;
		character witness;
		std::vector<pbf> delta;
	};

	// open addressing over models_, so each state owns a single allocation
	std::size_t intern(bitset g)
	{
		if (2 * (models_.size() + 1) > slots_.size()) { grow(); }
		const std::size_t mask = slots_.size() - 1;
		for (std::size_t i = slot_of(g) & mask;; i = (i + 1) & mask) {
			if (slots_[i] == empty_slot) {
				slots_[i] = models_.size();
				models_.push_back(std::move(g));
				return slots_[i];
			}
			if (models_[slots_[i]] == g) { return slots_[i]; }
		}
	}

	static std::size_t slot_of(const bitset& g)
	{
		std::uint64_t h = g.hash();
		h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
		h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
		return static_cast<std::size_t>(h ^ (h >> 31));
	}

	void grow()
	{
		slots_.assign(std::max<std::size_t>(16, 2 * slots_.size()), empty_slot);
		const std::size_t mask = slots_.size() - 1;
		for (std::size_t id = 0; id < models_.size(); ++id) {
			std::size_t i = slot_of(models_[id]) & mask;
			while (slots_[i] != empty_slot) { i = (i + 1) & mask; }
			slots_[i] = id;
		}
	}

	void compute_classes()
	{
		if (classes_done_) { return; }
		A& alg = m_.algebra();
		std::vector<state_id> all(m_.state_count());
		for (state_id s = 0; s < all.size(); ++s) { all[s] = s; }
		auto chars = alg.top();
		while (alg.is_sat(chars)) {
			const character a = alg.witness(chars);
			auto step = delta_on_char(m_, a, std::span<const state_id>(all));
			std::vector<pbf> delta;
			delta.reserve(all.size());
			for (const auto& [s, p] : step.successors) { delta.push_back(p); }
			chars = minus(alg, chars, step.cls);
			classes_.push_back({std::move(step.cls), a, std::move(delta)});
		}
		classes_done_ = true;
	}

	automaton<A> m_;
	std::vector<bitset> models_;
	std::vector<std::size_t> slots_;
	std::vector<std::size_t> succ_;   ///< offset into edges_, or not_done
	std::vector<edge> edges_;
	std::vector<char_class> classes_;
	bool classes_done_ = false;
};

template <boolean_algebra A>
struct reverse_result
{
	bool holds = false;      ///< empty / equivalent
	bool timed_out = false;
	std::optional<std::vector<typename A::character>> counterexample;
	std::size_t states_explored = 0;
	double wall_ms = 0.0;
};

namespace detail
{
/// Breadth-first search for a model on which `bad` holds.  The word along
/// the path is read backwards.
template <boolean_algebra A, class Bad>
reverse_result<A> reverse_search(const automaton<A>& m, Bad&& bad, const deadline& limit)
{
	using character = typename A::character;
	const auto start = std::chrono::steady_clock::now();
	reverse_result<A> res;
	reverse_dfa<A> dfa(m);
	std::vector<std::pair<long, character>> parent{{-1, character{}}};
	std::deque<std::size_t> queue{dfa.initial()};
	std::vector<char> seen{1};
	try {
		while (!queue.empty()) {
			limit.check();
			const std::size_t id = queue.front();
			queue.pop_front();
			if (bad(dfa, id)) {
				std::vector<character> w;
				for (long k = static_cast<long>(id); parent[static_cast<std::size_t>(k)].first >= 0;
				     k = parent[static_cast<std::size_t>(k)].first) {
					w.push_back(parent[static_cast<std::size_t>(k)].second);
				}
				// path order is a1..an; the accepted word is an..a1, which is
				// exactly the order collected walking back from the end
				res.counterexample = std::move(w);
				break;
			}
			for (const auto& e : dfa.successors(id)) {
				if (e.target >= seen.size()) {
					seen.resize(e.target + 1, 0);
					parent.resize(e.target + 1, {-1, character{}});
				}
				if (!seen[e.target]) {
					seen[e.target] = 1;
					parent[e.target] = {static_cast<long>(id), e.witness};
					queue.push_back(e.target);
				}
			}
		}
		res.holds = !res.counterexample.has_value();
	} catch (const timeout_error&) {
		res.timed_out = true;
	}
	res.states_explored = dfa.state_count();
	res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
	return res;
}
} // namespace detail

/// Emptiness of L(M) through the reverse DFA; the counterexample is an
/// accepted word.
template <boolean_algebra A>
reverse_result<A> reverse_empty(const automaton<A>& m, const deadline& limit = deadline::never())
{
	const pbf p0 = m.initial();
	return detail::reverse_search(m, [&](reverse_dfa<A>& d, std::size_t id) { return d.value(id, p0); }, limit);
}

/// L(p) = L(q) through the reverse DFA; the counterexample is accepted from
/// exactly one side.
template <boolean_algebra A>
reverse_result<A> reverse_equiv(const automaton<A>& m, pbf p, pbf q, const deadline& limit = deadline::never())
{
	m.check_formula(p);
	m.check_formula(q);
	return detail::reverse_search(
		m, [&](reverse_dfa<A>& d, std::size_t id) { return d.value(id, p) != d.value(id, q); }, limit);
}

} // namespace safa

#endif // SAFA_REVERSE_DFA_HH_
