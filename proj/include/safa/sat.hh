/* sat.hh -- a small incremental CDCL satisfiability solver.
 *
 * Two-watched-literal propagation, first-UIP learning with activity-based
 * branching, phase saving, Luby restarts and solving under assumptions.
 * Clauses are only ever added, never retracted.
 */

#ifndef SAFA_SAT_HH_
#define SAFA_SAT_HH_

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace safa
{

/// Literal encoded as 2*var + (negated ? 1 : 0).
class sat_lit
{
public:
	constexpr sat_lit() = default;
	constexpr sat_lit(int var, bool negated) : x_(2 * var + (negated ? 1 : 0)) { }

	static constexpr sat_lit from_index(int x)
	{
		sat_lit l;
		l.x_ = x;
		return l;
	}

	constexpr int var() const { return x_ >> 1; }
	constexpr bool negated() const { return (x_ & 1) != 0; }
	constexpr int index() const { return x_; }
	constexpr sat_lit operator~() const { return from_index(x_ ^ 1); }
	constexpr bool operator==(const sat_lit&) const = default;

private:
	int x_ = 0;
};

class sat_solver
{
public:
	int new_var()
	{
		const int v = static_cast<int>(assigns_.size());
		assigns_.push_back(undef);
		level_.push_back(0);
		reason_.push_back(no_reason);
		activity_.push_back(0.0);
		polarity_.push_back(1);
		seen_.push_back(0);
		heap_index_.push_back(-1);
		watches_.emplace_back();
		watches_.emplace_back();
		heap_insert(v);
		return v;
	}

	int var_count() const { return static_cast<int>(assigns_.size()); }

	/// False once the clause set is unsatisfiable on its own.
	bool okay() const { return ok_; }

	bool add_clause(std::span<const sat_lit> lits)
	{
		if (!ok_) { return false; }
		std::vector<sat_lit> c;
		for (sat_lit l : lits) {
			const auto v = value(l);
			if (v == l_true) { return true; }
			if (v == l_false) { continue; }
			bool dup = false;
			for (sat_lit o : c) {
				if (o == ~l) { return true; }
				if (o == l) { dup = true; }
			}
			if (!dup) { c.push_back(l); }
		}
		if (c.empty()) {
			ok_ = false;
			return false;
		}
		if (c.size() == 1) {
			enqueue(c[0], no_reason);
			ok_ = propagate() == no_reason;
			return ok_;
		}
		attach(store_clause(std::move(c), false));
		return true;
	}

	bool add_clause(std::initializer_list<sat_lit> lits)
	{
		return add_clause(std::span<const sat_lit>(lits.begin(), lits.size()));
	}

	/// Satisfiability of the clause set conjoined with the assumptions.  The
	/// solver returns to decision level 0 afterwards; after a true answer
	/// model_value() reports the found assignment.
	bool solve(std::span<const sat_lit> assumptions = {})
	{
		++solves_;
		if (!ok_) { return false; }
		assumptions_.assign(assumptions.begin(), assumptions.end());
		int restart = 0;
		int status = 0;
		while (status == 0) {
			const double budget = luby(2.0, restart++) * 100;
			status = search(static_cast<long>(budget));
		}
		if (status > 0) {
			model_.assign(assigns_.begin(), assigns_.end());
		}
		cancel_until(0);
		return status > 0;
	}

	bool solve(std::initializer_list<sat_lit> assumptions)
	{
		return solve(std::span<const sat_lit>(assumptions.begin(), assumptions.size()));
	}

	bool model_value(int var) const { return model_[static_cast<std::size_t>(var)] == l_true; }

	std::uint64_t solve_calls() const { return solves_; }
	std::uint64_t conflicts() const { return conflicts_; }

private:
	using lbool = std::int8_t;
	static constexpr lbool l_true = 1;
	static constexpr lbool l_false = -1;
	static constexpr lbool undef = 0;
	static constexpr int no_reason = -1;

	struct clause
	{
		std::vector<sat_lit> lits;
		bool learnt;
		bool removed = false;
		double activity = 0.0;
	};

	struct watcher
	{
		int cref;
		sat_lit blocker;
	};

	lbool value(sat_lit l) const
	{
		const lbool v = assigns_[static_cast<std::size_t>(l.var())];
		return l.negated() ? static_cast<lbool>(-v) : v;
	}

	int decision_level() const { return static_cast<int>(trail_lim_.size()); }

	int store_clause(std::vector<sat_lit> lits, bool learnt)
	{
		clauses_.push_back({std::move(lits), learnt});
		if (learnt) { learnts_.push_back(static_cast<int>(clauses_.size() - 1)); }
		return static_cast<int>(clauses_.size() - 1);
	}

	void attach(int cref)
	{
		const auto& c = clauses_[static_cast<std::size_t>(cref)];
		watches_[static_cast<std::size_t>((~c.lits[0]).index())].push_back({cref, c.lits[1]});
		watches_[static_cast<std::size_t>((~c.lits[1]).index())].push_back({cref, c.lits[0]});
	}

	void enqueue(sat_lit l, int reason)
	{
		const auto v = static_cast<std::size_t>(l.var());
		assigns_[v] = l.negated() ? l_false : l_true;
		level_[v] = decision_level();
		reason_[v] = reason;
		trail_.push_back(l);
	}

	/// Returns the conflicting clause or no_reason.
	int propagate()
	{
		int conflict = no_reason;
		while (qhead_ < trail_.size()) {
			const sat_lit p = trail_[qhead_++];
			auto& ws = watches_[static_cast<std::size_t>(p.index())];
			std::size_t i = 0, j = 0;
			const sat_lit false_lit = ~p;
			while (i < ws.size()) {
				const watcher w = ws[i];
				if (clauses_[static_cast<std::size_t>(w.cref)].removed) {
					++i;
					continue;
				}
				if (value(w.blocker) == l_true) {
					ws[j++] = ws[i++];
					continue;
				}
				auto& c = clauses_[static_cast<std::size_t>(w.cref)].lits;
				if (c[0] == false_lit) { std::swap(c[0], c[1]); }
				++i;
				const sat_lit first = c[0];
				if (first != w.blocker && value(first) == l_true) {
					ws[j++] = {w.cref, first};
					continue;
				}
				bool moved = false;
				for (std::size_t k = 2; k < c.size(); ++k) {
					if (value(c[k]) != l_false) {
						std::swap(c[1], c[k]);
						watches_[static_cast<std::size_t>((~c[1]).index())].push_back({w.cref, first});
						moved = true;
						break;
					}
				}
				if (moved) { continue; }
				ws[j++] = {w.cref, first};
				if (value(first) == l_false) {
					conflict = w.cref;
					qhead_ = trail_.size();
					while (i < ws.size()) { ws[j++] = ws[i++]; }
				} else {
					enqueue(first, w.cref);
				}
			}
			ws.resize(j);
			if (conflict != no_reason) { break; }
		}
		return conflict;
	}

	void analyze(int conflict, std::vector<sat_lit>& learnt, int& back_level)
	{
		learnt.clear();
		learnt.emplace_back();
		int path = 0;
		sat_lit p;
		bool have_p = false;
		std::size_t index = trail_.size();
		do {
			auto& c = clauses_[static_cast<std::size_t>(conflict)];
			if (c.learnt) { bump_clause(c); }
			for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
				const sat_lit q = c.lits[k];
				const auto v = static_cast<std::size_t>(q.var());
				if (!seen_[v] && level_[v] > 0) {
					bump_var(q.var());
					seen_[v] = 1;
					if (level_[v] >= decision_level()) { ++path; }
					else { learnt.push_back(q); }
				}
			}
			while (!seen_[static_cast<std::size_t>(trail_[--index].var())]) { }
			p = trail_[index];
			have_p = true;
			conflict = reason_[static_cast<std::size_t>(p.var())];
			seen_[static_cast<std::size_t>(p.var())] = 0;
			--path;
			// reason clauses keep the implied literal first
			if (path > 0) { ensure_first(conflict, p); }
		} while (path > 0);
		learnt[0] = ~p;

		back_level = 0;
		std::size_t max_i = 1;
		for (std::size_t k = 1; k < learnt.size(); ++k) {
			const int lv = level_[static_cast<std::size_t>(learnt[k].var())];
			if (lv > back_level) {
				back_level = lv;
				max_i = k;
			}
		}
		if (learnt.size() > 1) { std::swap(learnt[1], learnt[max_i]); }
		for (sat_lit l : learnt) { seen_[static_cast<std::size_t>(l.var())] = 0; }
	}

	void ensure_first(int cref, sat_lit p)
	{
		auto& c = clauses_[static_cast<std::size_t>(cref)].lits;
		if (c[0] != p) {
			for (std::size_t k = 1; k < c.size(); ++k) {
				if (c[k] == p) {
					std::swap(c[0], c[k]);
					break;
				}
			}
		}
	}

	void cancel_until(int level)
	{
		if (decision_level() <= level) { return; }
		const auto stop = static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(level)]);
		for (std::size_t c = trail_.size(); c-- > stop;) {
			const auto v = static_cast<std::size_t>(trail_[c].var());
			polarity_[v] = trail_[c].negated() ? 1 : 0;
			assigns_[v] = undef;
			reason_[v] = no_reason;
			if (heap_index_[v] < 0) { heap_insert(static_cast<int>(v)); }
		}
		trail_.resize(stop);
		qhead_ = stop;
		trail_lim_.resize(static_cast<std::size_t>(level));
	}

	/// 1 = sat, -1 = unsat, 0 = restart.
	int search(long conflict_budget)
	{
		std::vector<sat_lit> learnt;
		long conflicts_here = 0;
		for (;;) {
			const int conflict = propagate();
			if (conflict != no_reason) {
				++conflicts_;
				++conflicts_here;
				if (decision_level() == 0) {
					ok_ = false;
					return -1;
				}
				int back_level = 0;
				analyze(conflict, learnt, back_level);
				cancel_until(back_level);
				if (learnt.size() == 1) {
					enqueue(learnt[0], no_reason);
				} else {
					const int cref = store_clause(learnt, true);
					attach(cref);
					bump_clause(clauses_[static_cast<std::size_t>(cref)]);
					enqueue(learnt[0], cref);
				}
				var_inc_ /= 0.95;
				clause_inc_ /= 0.999;
			} else {
				if (conflicts_here >= conflict_budget) {
					cancel_until(0);
					return 0;
				}
				if (learnts_.size() > max_learnts_ + trail_.size()) { reduce_db(); }

				sat_lit next;
				bool have_next = false;
				while (decision_level() < static_cast<int>(assumptions_.size())) {
					const sat_lit a = assumptions_[static_cast<std::size_t>(decision_level())];
					if (value(a) == l_true) {
						trail_lim_.push_back(static_cast<int>(trail_.size()));
					} else if (value(a) == l_false) {
						// the clauses imply the negation of an assumption
						cancel_until(0);
						return -1;
					} else {
						next = a;
						have_next = true;
						break;
					}
				}
				if (!have_next) {
					const int v = pick_branch_var();
					if (v < 0) { return 1; }
					next = sat_lit(v, polarity_[static_cast<std::size_t>(v)] != 0);
				}
				trail_lim_.push_back(static_cast<int>(trail_.size()));
				enqueue(next, no_reason);
			}
		}
	}

	void reduce_db()
	{
		std::vector<int> sorted = learnts_;
		std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
			return clauses_[static_cast<std::size_t>(a)].activity < clauses_[static_cast<std::size_t>(b)].activity;
		});
		std::vector<int> keep;
		const std::size_t half = sorted.size() / 2;
		for (std::size_t k = 0; k < sorted.size(); ++k) {
			auto& c = clauses_[static_cast<std::size_t>(sorted[k])];
			if (k < half && c.lits.size() > 2 && !locked(sorted[k])) {
				c.removed = true;
				c.lits.clear();
				c.lits.shrink_to_fit();
			} else {
				keep.push_back(sorted[k]);
			}
		}
		learnts_ = std::move(keep);
		max_learnts_ = max_learnts_ + max_learnts_ / 10;
	}

	bool locked(int cref) const
	{
		const auto& c = clauses_[static_cast<std::size_t>(cref)];
		const auto v = static_cast<std::size_t>(c.lits[0].var());
		return reason_[v] == cref && value(c.lits[0]) == l_true;
	}

	void bump_var(int v)
	{
		auto& a = activity_[static_cast<std::size_t>(v)];
		a += var_inc_;
		if (a > 1e100) {
			for (auto& x : activity_) { x *= 1e-100; }
			var_inc_ *= 1e-100;
		}
		if (heap_index_[static_cast<std::size_t>(v)] >= 0) { heap_up(heap_index_[static_cast<std::size_t>(v)]); }
	}

	void bump_clause(clause& c)
	{
		c.activity += clause_inc_;
		if (c.activity > 1e20) {
			for (int cref : learnts_) { clauses_[static_cast<std::size_t>(cref)].activity *= 1e-20; }
			clause_inc_ *= 1e-20;
		}
	}

	int pick_branch_var()
	{
		while (!heap_.empty()) {
			const int v = heap_pop();
			if (assigns_[static_cast<std::size_t>(v)] == undef) { return v; }
		}
		return -1;
	}

	// binary max-heap on activity
	bool heap_less(int a, int b) const
	{
		return activity_[static_cast<std::size_t>(a)] > activity_[static_cast<std::size_t>(b)];
	}

	void heap_insert(int v)
	{
		heap_index_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
		heap_.push_back(v);
		heap_up(static_cast<int>(heap_.size()) - 1);
	}

	void heap_up(int i)
	{
		const int v = heap_[static_cast<std::size_t>(i)];
		while (i > 0) {
			const int parent = (i - 1) / 2;
			const int pv = heap_[static_cast<std::size_t>(parent)];
			if (!heap_less(v, pv)) { break; }
			heap_[static_cast<std::size_t>(i)] = pv;
			heap_index_[static_cast<std::size_t>(pv)] = i;
			i = parent;
		}
		heap_[static_cast<std::size_t>(i)] = v;
		heap_index_[static_cast<std::size_t>(v)] = i;
	}

	void heap_down(int i)
	{
		const int v = heap_[static_cast<std::size_t>(i)];
		const int n = static_cast<int>(heap_.size());
		for (;;) {
			int child = 2 * i + 1;
			if (child >= n) { break; }
			if (child + 1 < n && heap_less(heap_[static_cast<std::size_t>(child + 1)], heap_[static_cast<std::size_t>(child)])) {
				++child;
			}
			const int cv = heap_[static_cast<std::size_t>(child)];
			if (!heap_less(cv, v)) { break; }
			heap_[static_cast<std::size_t>(i)] = cv;
			heap_index_[static_cast<std::size_t>(cv)] = i;
			i = child;
		}
		heap_[static_cast<std::size_t>(i)] = v;
		heap_index_[static_cast<std::size_t>(v)] = i;
	}

	int heap_pop()
	{
		const int top = heap_.front();
		heap_index_[static_cast<std::size_t>(top)] = -1;
		const int last = heap_.back();
		heap_.pop_back();
		if (!heap_.empty()) {
			heap_[0] = last;
			heap_index_[static_cast<std::size_t>(last)] = 0;
			heap_down(0);
		}
		return top;
	}

	static double luby(double y, int x)
	{
		int size = 1, seq = 0;
		while (size < x + 1) {
			++seq;
			size = 2 * size + 1;
		}
		while (size - 1 != x) {
			size = (size - 1) >> 1;
			--seq;
			x = x % size;
		}
		double r = 1.0;
		for (int k = 0; k < seq; ++k) { r *= y; }
		return r;
	}

	bool ok_ = true;
	std::vector<clause> clauses_;
	std::vector<int> learnts_;
	std::vector<std::vector<watcher>> watches_;
	std::vector<lbool> assigns_;
	std::vector<lbool> model_;
	std::vector<int> level_;
	std::vector<int> reason_;
	std::vector<double> activity_;
	std::vector<std::uint8_t> polarity_;
	std::vector<std::uint8_t> seen_;
	std::vector<int> heap_;
	std::vector<int> heap_index_;
	std::vector<sat_lit> trail_;
	std::vector<int> trail_lim_;
	std::vector<sat_lit> assumptions_;
	std::size_t qhead_ = 0;
	double var_inc_ = 1.0;
	double clause_inc_ = 1.0;
	std::size_t max_learnts_ = 2000;
	std::uint64_t solves_ = 0;
	std::uint64_t conflicts_ = 0;
};

} // namespace safa

#endif // SAFA_SAT_HH_
