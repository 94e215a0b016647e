/* pbf.hh -- positive Boolean formulas over automaton states.
 *
 * Formulas are hash-consed DAG nodes owned by a pbf_store: two formulas are
 * structurally equal iff they have the same id.  Construction applies only
 * local simplifications (units, annihilators, idempotence) and orders the
 * operands of the commutative connectives by id.
 */

#ifndef SAFA_PBF_HH_
#define SAFA_PBF_HH_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <safa/common.hh>

namespace safa
{

using state_id = std::uint32_t;

class pbf
{
public:
	constexpr pbf() = default;
	constexpr explicit pbf(std::uint32_t id) : id_(id) { }

	constexpr std::uint32_t id() const { return id_; }

	constexpr bool operator==(const pbf&) const = default;
	constexpr auto operator<=>(const pbf&) const = default;

private:
	std::uint32_t id_ = 0;
};

struct pbf_hash
{
	std::size_t operator()(pbf p) const { return std::hash<std::uint32_t>{}(p.id()); }
};

enum class pbf_kind : std::uint8_t { ff, tt, state, conj, disj };

class pbf_store
{
public:
	static constexpr pbf ff{0};
	static constexpr pbf tt{1};

	pbf_store()
	{
		nodes_.push_back({pbf_kind::ff, 0, 0});
		nodes_.push_back({pbf_kind::tt, 0, 0});
	}

	pbf_store(const pbf_store&) = delete;
	pbf_store& operator=(const pbf_store&) = delete;

	pbf falsity() const { return ff; }
	pbf truth() const { return tt; }

	pbf state(state_id s) { return intern({pbf_kind::state, s, 0}); }

	pbf conj(pbf a, pbf b)
	{
		if (a == ff || b == ff) { return ff; }
		if (a == tt) { return b; }
		if (b == tt || a == b) { return a; }
		if (b < a) { std::swap(a, b); }
		return intern({pbf_kind::conj, a.id(), b.id()});
	}

	pbf disj(pbf a, pbf b)
	{
		if (a == tt || b == tt) { return tt; }
		if (a == ff) { return b; }
		if (b == ff || a == b) { return a; }
		if (b < a) { std::swap(a, b); }
		return intern({pbf_kind::disj, a.id(), b.id()});
	}

	pbf make(pbf_kind kind, pbf a = ff, pbf b = ff)
	{
		switch (kind) {
		case pbf_kind::ff: return ff;
		case pbf_kind::tt: return tt;
		case pbf_kind::state: return state(a.id());
		case pbf_kind::conj: return conj(a, b);
		case pbf_kind::disj: return disj(a, b);
		}
		return ff;
	}

	pbf conj_all(std::span<const pbf> ps)
	{
		pbf r = tt;
		for (pbf p : ps) { r = conj(r, p); }
		return r;
	}

	pbf disj_all(std::span<const pbf> ps)
	{
		pbf r = ff;
		for (pbf p : ps) { r = disj(r, p); }
		return r;
	}

	pbf_kind kind(pbf p) const { return nodes_[p.id()].kind; }
	state_id state_of(pbf p) const { return nodes_[p.id()].a; }
	pbf left(pbf p) const { return pbf(nodes_[p.id()].a); }
	pbf right(pbf p) const { return pbf(nodes_[p.id()].b); }
	std::size_t node_count() const { return nodes_.size(); }

	/// Number of distinct DAG nodes reachable from p.
	std::size_t size(pbf p)
	{
		if (p.id() < sizes_.size() && sizes_[p.id()] != 0) { return sizes_[p.id()]; }
		std::size_t n = 0;
		visit(p, [&](pbf) { ++n; });
		if (sizes_.size() < nodes_.size()) { sizes_.resize(nodes_.size(), 0); }
		sizes_[p.id()] = static_cast<std::uint32_t>(n);
		return n;
	}

	/// Sorted set of states occurring in p.
	const std::vector<state_id>& states(pbf p)
	{
		if (auto it = states_.find(p.id()); it != states_.end()) { return it->second; }
		std::vector<state_id> out;
		visit(p, [&](pbf q) {
			if (kind(q) == pbf_kind::state) { out.push_back(state_of(q)); }
		});
		std::sort(out.begin(), out.end());
		return states_.emplace(p.id(), std::move(out)).first->second;
	}

	/// Value of p under the model m : Q -> 2.
	bool eval(const bitset& m, pbf p) const
	{
		++eval_epoch_;
		if (eval_stamp_.size() < nodes_.size()) {
			eval_stamp_.resize(nodes_.size(), 0);
			eval_value_.resize(nodes_.size(), 0);
		}
		return eval_rec(m, p);
	}

	/// Homomorphic extension of sigma : state -> pbf.  Memoized over shared
	/// subterms.
	template <class Sigma>
	pbf substitute(pbf p, Sigma&& sigma)
	{
		std::unordered_map<std::uint32_t, pbf> memo;
		return substitute_rec(p, sigma, memo);
	}

	/// Swaps conjunction and disjunction (and true/false).
	pbf de_morgan(pbf p)
	{
		std::unordered_map<std::uint32_t, pbf> memo;
		return de_morgan_rec(p, memo);
	}

	/// Infix text; states print as their index unless `name` is given.
	std::string to_string(pbf p, const std::function<std::string(state_id)>& name = {}) const
	{
		return to_string_rec(p, name, 0);
	}

private:
	struct node
	{
		pbf_kind kind;
		std::uint32_t a;
		std::uint32_t b;

		bool operator==(const node&) const = default;
	};

	struct node_hash
	{
		std::size_t operator()(const node& n) const
		{
			return hash_combine(hash_combine(static_cast<std::size_t>(n.kind), n.a), n.b);
		}
	};

	pbf intern(const node& n)
	{
		auto [it, inserted] = index_.emplace(n, static_cast<std::uint32_t>(nodes_.size()));
		if (inserted) { nodes_.push_back(n); }
		return pbf(it->second);
	}

	template <class F>
	void visit(pbf root, F&& f)
	{
		++visit_epoch_;
		if (visit_stamp_.size() < nodes_.size()) { visit_stamp_.resize(nodes_.size(), 0); }
		std::vector<std::uint32_t> stack{root.id()};
		visit_stamp_[root.id()] = visit_epoch_;
		while (!stack.empty()) {
			const std::uint32_t id = stack.back();
			stack.pop_back();
			f(pbf(id));
			const node& n = nodes_[id];
			if (n.kind == pbf_kind::conj || n.kind == pbf_kind::disj) {
				for (std::uint32_t c : {n.a, n.b}) {
					if (visit_stamp_[c] != visit_epoch_) {
						visit_stamp_[c] = visit_epoch_;
						stack.push_back(c);
					}
				}
			}
		}
	}

	bool eval_rec(const bitset& m, pbf p) const
	{
		const node& n = nodes_[p.id()];
		switch (n.kind) {
		case pbf_kind::ff: return false;
		case pbf_kind::tt: return true;
		case pbf_kind::state: return m.test(n.a);
		default: break;
		}
		if (eval_stamp_[p.id()] == eval_epoch_) { return eval_value_[p.id()] != 0; }
		bool v;
		if (n.kind == pbf_kind::conj) {
			v = eval_rec(m, pbf(n.a)) && eval_rec(m, pbf(n.b));
		} else {
			v = eval_rec(m, pbf(n.a)) || eval_rec(m, pbf(n.b));
		}
		eval_stamp_[p.id()] = eval_epoch_;
		eval_value_[p.id()] = v ? 1 : 0;
		return v;
	}

	template <class Sigma>
	pbf substitute_rec(pbf p, Sigma& sigma, std::unordered_map<std::uint32_t, pbf>& memo)
	{
		const node n = nodes_[p.id()];
		switch (n.kind) {
		case pbf_kind::ff:
		case pbf_kind::tt: return p;
		case pbf_kind::state: return sigma(static_cast<state_id>(n.a));
		default: break;
		}
		if (auto it = memo.find(p.id()); it != memo.end()) { return it->second; }
		const pbf l = substitute_rec(pbf(n.a), sigma, memo);
		const pbf r = substitute_rec(pbf(n.b), sigma, memo);
		const pbf out = n.kind == pbf_kind::conj ? conj(l, r) : disj(l, r);
		memo.emplace(p.id(), out);
		return out;
	}

	pbf de_morgan_rec(pbf p, std::unordered_map<std::uint32_t, pbf>& memo)
	{
		const node n = nodes_[p.id()];
		switch (n.kind) {
		case pbf_kind::ff: return tt;
		case pbf_kind::tt: return ff;
		case pbf_kind::state: return p;
		default: break;
		}
		if (auto it = memo.find(p.id()); it != memo.end()) { return it->second; }
		const pbf l = de_morgan_rec(pbf(n.a), memo);
		const pbf r = de_morgan_rec(pbf(n.b), memo);
		const pbf out = n.kind == pbf_kind::conj ? disj(l, r) : conj(l, r);
		memo.emplace(p.id(), out);
		return out;
	}

	std::string to_string_rec(pbf p, const std::function<std::string(state_id)>& name, int parent) const
	{
		const node& n = nodes_[p.id()];
		switch (n.kind) {
		case pbf_kind::ff: return "false";
		case pbf_kind::tt: return "true";
		case pbf_kind::state: return name ? name(n.a) : std::to_string(n.a);
		default: break;
		}
		// precedence: | = 1, & = 2
		const int prec = n.kind == pbf_kind::conj ? 2 : 1;
		const char* op = n.kind == pbf_kind::conj ? " & " : " | ";
		std::string s = to_string_rec(pbf(n.a), name, prec) + op + to_string_rec(pbf(n.b), name, prec);
		return prec < parent ? "(" + s + ")" : s;
	}

	std::vector<node> nodes_;
	std::unordered_map<node, std::uint32_t, node_hash> index_;
	std::vector<std::uint32_t> sizes_;
	std::unordered_map<std::uint32_t, std::vector<state_id>> states_;

	std::vector<std::uint32_t> visit_stamp_;
	std::uint32_t visit_epoch_ = 0;
	mutable std::vector<std::uint32_t> eval_stamp_;
	mutable std::vector<std::uint8_t> eval_value_;
	mutable std::uint32_t eval_epoch_ = 0;
};

} // namespace safa

#endif // SAFA_PBF_HH_
