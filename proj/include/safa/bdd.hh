/* bdd.hh -- k-bit bitvector predicates represented as reduced ordered BDDs.
 *
 * Variable i is the i-th declared atomic proposition; the variable order is
 * the declaration order and never changes.  A character is a k-bit vector
 * stored in an integer with bit i holding proposition i.
 */

#ifndef SAFA_BDD_HH_
#define SAFA_BDD_HH_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <safa/common.hh>
#include <safa/interval.hh>

namespace safa
{

class bv_algebra;

class bv_predicate
{
public:
	bv_predicate() = default;

	std::uint32_t node() const { return node_; }
	std::uint32_t tag() const { return tag_; }

	bool operator==(const bv_predicate&) const = default;

private:
	friend class bv_algebra;

	bv_predicate(std::uint32_t tag, std::uint32_t node) : tag_(tag), node_(node) { }

	std::uint32_t tag_ = 0;
	std::uint32_t node_ = 0;
};

class bv_algebra
{
public:
	using predicate = bv_predicate;
	using character = std::uint64_t;

	explicit bv_algebra(std::vector<std::string> atoms)
		: tag_(detail::next_algebra_tag()), atoms_(std::move(atoms))
	{
		if (atoms_.size() > 63) { throw usage_error("at most 63 atomic propositions are supported"); }
		const auto k = static_cast<std::uint32_t>(atoms_.size());
		nodes_.push_back({k, 0, 0}); // false
		nodes_.push_back({k, 1, 1}); // true
	}

	explicit bv_algebra(unsigned width) : bv_algebra(default_names(width)) { }

	unsigned width() const { return static_cast<unsigned>(atoms_.size()); }
	const std::vector<std::string>& atoms() const { return atoms_; }
	std::uint32_t tag() const { return tag_; }
	std::size_t node_count() const { return nodes_.size(); }

	/// Index of a declared atom, or -1.
	int atom_index(const std::string& name) const
	{
		for (std::size_t i = 0; i < atoms_.size(); ++i) {
			if (atoms_[i] == name) { return static_cast<int>(i); }
		}
		return -1;
	}

	predicate top() const { return {tag_, 1}; }
	predicate bot() const { return {tag_, 0}; }

	/// The predicate "bit i is set".
	predicate var(unsigned i)
	{
		if (i >= width()) { throw usage_error("bit index out of range"); }
		return {tag_, make(i, 0, 1)};
	}

	predicate conj(const predicate& a, const predicate& b)
	{
		check(a);
		check(b);
		return {tag_, apply(op_and, a.node_, b.node_)};
	}

	predicate disj(const predicate& a, const predicate& b)
	{
		check(a);
		check(b);
		return {tag_, apply(op_or, a.node_, b.node_)};
	}

	predicate negate(const predicate& a)
	{
		check(a);
		return {tag_, negate_node(a.node_)};
	}

	bool is_sat(const predicate& a) const
	{
		check(a);
		return a.node_ != 0;
	}

	/// Lexicographically smallest satisfying assignment in variable order
	/// (unconstrained bits are 0).
	character witness(const predicate& a) const
	{
		check(a);
		if (a.node_ == 0) { throw usage_error("witness of an unsatisfiable predicate"); }
		character c = 0;
		std::uint32_t n = a.node_;
		while (n > 1) {
			const auto& nd = nodes_[n];
			if (nd.lo != 0) {
				n = nd.lo;
			} else {
				c |= character{1} << nd.var;
				n = nd.hi;
			}
		}
		return c;
	}

	bool member(character c, const predicate& a) const
	{
		check(a);
		check_char(c);
		std::uint32_t n = a.node_;
		while (n > 1) {
			const auto& nd = nodes_[n];
			n = ((c >> nd.var) & 1U) ? nd.hi : nd.lo;
		}
		return n == 1;
	}

	void check_char(character c) const
	{
		if (width() < 64 && (c >> width()) != 0) {
			throw usage_error("bitvector character wider than " + std::to_string(width()) + " bits");
		}
	}

	/// Disjunction of cubes over the atom names, e.g. `p & !q | r`.
	std::string to_string(const predicate& a) const
	{
		check(a);
		if (a.node_ == 0) { return "false"; }
		if (a.node_ == 1) { return "true"; }
		std::vector<std::string> cubes;
		std::vector<std::string> path;
		collect_cubes(a.node_, path, cubes);
		std::string s;
		for (std::size_t i = 0; i < cubes.size(); ++i) {
			if (i != 0) { s += " | "; }
			s += cubes[i];
		}
		return s;
	}

	/// Atom set of a character, e.g. `{p, r}`.
	std::string character_to_string(character c) const
	{
		std::string s = "{";
		bool first = true;
		for (unsigned i = 0; i < width(); ++i) {
			if ((c >> i) & 1U) {
				if (!first) { s += ", "; }
				s += atoms_[i];
				first = false;
			}
		}
		return s + "}";
	}

	static std::size_t hash(const predicate& a) { return a.node_; }

private:
	struct bdd_node
	{
		std::uint32_t var;
		std::uint32_t lo;
		std::uint32_t hi;
	};

	enum op_code : std::uint64_t { op_and = 0, op_or = 1, op_not = 2 };

	static std::vector<std::string> default_names(unsigned width)
	{
		std::vector<std::string> names;
		for (unsigned i = 0; i < width; ++i) { names.push_back("b" + std::to_string(i)); }
		return names;
	}

	void check(const predicate& a) const
	{
		if (a.tag_ != tag_) { throw usage_error("predicate belongs to a different bitvector algebra"); }
	}

	std::uint32_t level(std::uint32_t n) const { return nodes_[n].var; }

	std::uint32_t make(std::uint32_t var, std::uint32_t lo, std::uint32_t hi)
	{
		if (lo == hi) { return lo; }
		const std::uint64_t key = (static_cast<std::uint64_t>(var) << 58) ^
			(static_cast<std::uint64_t>(lo) << 29) ^ hi;
		auto [it, range_end] = unique_.equal_range(key);
		for (; it != range_end; ++it) {
			const auto& nd = nodes_[it->second];
			if (nd.var == var && nd.lo == lo && nd.hi == hi) { return it->second; }
		}
		const auto id = static_cast<std::uint32_t>(nodes_.size());
		nodes_.push_back({var, lo, hi});
		unique_.emplace(key, id);
		return id;
	}

	std::uint32_t apply(op_code op, std::uint32_t a, std::uint32_t b)
	{
		if (op == op_and) {
			if (a == 0 || b == 0) { return 0; }
			if (a == 1) { return b; }
			if (b == 1 || a == b) { return a; }
		} else {
			if (a == 1 || b == 1) { return 1; }
			if (a == 0) { return b; }
			if (b == 0 || a == b) { return a; }
		}
		if (a > b) { std::swap(a, b); }
		const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32 | b) * 4 + op;
		if (auto it = cache_.find(key); it != cache_.end()) { return it->second; }
		const std::uint32_t v = std::min(level(a), level(b));
		const std::uint32_t a_lo = level(a) == v ? nodes_[a].lo : a;
		const std::uint32_t a_hi = level(a) == v ? nodes_[a].hi : a;
		const std::uint32_t b_lo = level(b) == v ? nodes_[b].lo : b;
		const std::uint32_t b_hi = level(b) == v ? nodes_[b].hi : b;
		const std::uint32_t lo = apply(op, a_lo, b_lo);
		const std::uint32_t hi = apply(op, a_hi, b_hi);
		const std::uint32_t r = make(v, lo, hi);
		cache_.emplace(key, r);
		return r;
	}

	std::uint32_t negate_node(std::uint32_t a)
	{
		if (a <= 1) { return 1 - a; }
		const std::uint64_t key = static_cast<std::uint64_t>(a) * 4 + op_not;
		if (auto it = cache_.find(key); it != cache_.end()) { return it->second; }
		const auto nd = nodes_[a];
		const std::uint32_t lo = negate_node(nd.lo);
		const std::uint32_t hi = negate_node(nd.hi);
		const std::uint32_t r = make(nd.var, lo, hi);
		cache_.emplace(key, r);
		return r;
	}

	void collect_cubes(std::uint32_t n, std::vector<std::string>& path, std::vector<std::string>& out) const
	{
		if (n == 0) { return; }
		if (n == 1) {
			std::string cube;
			for (std::size_t i = 0; i < path.size(); ++i) {
				if (i != 0) { cube += " & "; }
				cube += path[i];
			}
			out.push_back(path.empty() ? "true" : cube);
			return;
		}
		const auto nd = nodes_[n];
		path.push_back("!" + atoms_[nd.var]);
		collect_cubes(nd.lo, path, out);
		path.back() = atoms_[nd.var];
		collect_cubes(nd.hi, path, out);
		path.pop_back();
	}

	std::uint32_t tag_;
	std::vector<std::string> atoms_;
	std::vector<bdd_node> nodes_;
	std::unordered_multimap<std::uint64_t, std::uint32_t> unique_;
	std::unordered_map<std::uint64_t, std::uint32_t> cache_;
};

} // namespace safa

#endif // SAFA_BDD_HH_
