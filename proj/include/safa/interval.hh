/* interval.hh -- the effective Boolean algebra of finite unions of intervals
 * over codepoints 0..max.
 */

#ifndef SAFA_INTERVAL_HH_
#define SAFA_INTERVAL_HH_

#include <atomic>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <safa/common.hh>

namespace safa
{

using codepoint = std::uint32_t;

namespace detail
{
inline std::uint32_t next_algebra_tag()
{
	static std::atomic<std::uint32_t> counter{1};
	return counter++;
}
} // namespace detail

class interval_algebra;

/// Canonical set of characters: sorted, disjoint, non-adjacent inclusive
/// intervals.  Equal denotations have equal representations.
class interval_predicate
{
public:
	using interval = std::pair<codepoint, codepoint>;

	interval_predicate() = default;

	const std::vector<interval>& intervals() const { return ivs_; }
	std::uint32_t tag() const { return tag_; }

	bool operator==(const interval_predicate&) const = default;

private:
	friend class interval_algebra;

	interval_predicate(std::uint32_t tag, std::vector<interval> ivs) : tag_(tag), ivs_(std::move(ivs)) { }

	std::uint32_t tag_ = 0;
	std::vector<interval> ivs_;
};

class interval_algebra
{
public:
	using predicate = interval_predicate;
	using character = codepoint;
	using interval = interval_predicate::interval;

	static constexpr codepoint unicode_max = 0x10FFFF;

	explicit interval_algebra(codepoint max = unicode_max)
		: tag_(detail::next_algebra_tag()), max_(max) { }

	codepoint max_char() const { return max_; }
	std::uint32_t tag() const { return tag_; }

	predicate top() const { return {tag_, {{0, max_}}}; }
	predicate bot() const { return {tag_, {}}; }

	/// [lo, hi] clipped to the domain.
	predicate range(codepoint lo, codepoint hi) const
	{
		if (lo > hi || lo > max_) { return bot(); }
		return {tag_, {{lo, std::min(hi, max_)}}};
	}

	predicate singleton(codepoint c) const { return range(c, c); }

	/// Builds a canonical predicate from arbitrary (possibly overlapping,
	/// unsorted) intervals; parts outside the domain are dropped.
	predicate from_intervals(std::vector<interval> ivs) const
	{
		std::vector<interval> clipped;
		for (auto [lo, hi] : ivs) {
			if (lo > hi || lo > max_) { continue; }
			clipped.emplace_back(lo, std::min(hi, max_));
		}
		std::sort(clipped.begin(), clipped.end());
		std::vector<interval> out;
		for (const auto& iv : clipped) {
			if (!out.empty() && static_cast<std::uint64_t>(out.back().second) + 1 >= iv.first) {
				out.back().second = std::max(out.back().second, iv.second);
			} else {
				out.push_back(iv);
			}
		}
		return {tag_, std::move(out)};
	}

	predicate conj(const predicate& a, const predicate& b) const
	{
		check(a);
		check(b);
		std::vector<interval> out;
		std::size_t i = 0, j = 0;
		while (i < a.ivs_.size() && j < b.ivs_.size()) {
			const codepoint lo = std::max(a.ivs_[i].first, b.ivs_[j].first);
			const codepoint hi = std::min(a.ivs_[i].second, b.ivs_[j].second);
			if (lo <= hi) { out.emplace_back(lo, hi); }
			if (a.ivs_[i].second < b.ivs_[j].second) { ++i; } else { ++j; }
		}
		return {tag_, std::move(out)};
	}

	predicate disj(const predicate& a, const predicate& b) const
	{
		check(a);
		check(b);
		std::vector<interval> all = a.ivs_;
		all.insert(all.end(), b.ivs_.begin(), b.ivs_.end());
		return from_intervals(std::move(all));
	}

	predicate negate(const predicate& a) const
	{
		check(a);
		std::vector<interval> out;
		std::uint64_t next = 0;
		for (auto [lo, hi] : a.ivs_) {
			if (next < lo) { out.emplace_back(static_cast<codepoint>(next), lo - 1); }
			next = static_cast<std::uint64_t>(hi) + 1;
		}
		if (next <= max_) { out.emplace_back(static_cast<codepoint>(next), max_); }
		return {tag_, std::move(out)};
	}

	bool is_sat(const predicate& a) const
	{
		check(a);
		return !a.ivs_.empty();
	}

	/// Smallest member.
	character witness(const predicate& a) const
	{
		check(a);
		if (a.ivs_.empty()) { throw usage_error("witness of an unsatisfiable predicate"); }
		return a.ivs_.front().first;
	}

	bool member(character c, const predicate& a) const
	{
		check(a);
		check_char(c);
		auto it = std::upper_bound(a.ivs_.begin(), a.ivs_.end(), c,
			[](codepoint x, const interval& iv) { return x < iv.first; });
		if (it == a.ivs_.begin()) { return false; }
		--it;
		return c <= it->second;
	}

	void check_char(character c) const
	{
		if (c > max_) { throw usage_error("character " + std::to_string(c) + " outside the domain"); }
	}

	/// `[97-122 48]`, `true` or `false`.
	std::string to_string(const predicate& a) const
	{
		if (a.ivs_.empty()) { return "false"; }
		if (a == top()) { return "true"; }
		std::string s = "[";
		for (std::size_t i = 0; i < a.ivs_.size(); ++i) {
			if (i != 0) { s += ' '; }
			s += std::to_string(a.ivs_[i].first);
			if (a.ivs_[i].second != a.ivs_[i].first) { s += "-" + std::to_string(a.ivs_[i].second); }
		}
		return s + "]";
	}

	static std::size_t hash(const predicate& a)
	{
		std::size_t h = a.ivs_.size();
		for (auto [lo, hi] : a.ivs_) { h = hash_combine(hash_combine(h, lo), hi); }
		return h;
	}

private:
	void check(const predicate& a) const
	{
		if (a.tag_ != tag_) { throw usage_error("predicate belongs to a different interval algebra"); }
	}

	std::uint32_t tag_;
	codepoint max_;
};

} // namespace safa

#endif // SAFA_INTERVAL_HH_
