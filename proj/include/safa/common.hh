/* common.hh -- error types, deadlines and a small dynamic bitset shared by
 * the whole library.
 */

#ifndef SAFA_COMMON_HH_
#define SAFA_COMMON_HH_

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace safa
{

/// Misuse of the API: mixed algebra instances, out-of-range states or
/// characters, witness of an unsatisfiable predicate.
class usage_error : public std::logic_error
{
public:
	using std::logic_error::logic_error;
};

/// Malformed textual input.  Line and column are 1-based; 0 means unknown.
class parse_error : public std::runtime_error
{
public:
	parse_error(const std::string& msg, std::size_t line = 0, std::size_t column = 0)
		: std::runtime_error(format(msg, line, column)), line_(line), column_(column) { }

	std::size_t line() const { return line_; }
	std::size_t column() const { return column_; }

private:
	static std::string format(const std::string& msg, std::size_t line, std::size_t column)
	{
		if (line == 0 && column == 0) { return msg; }
		std::string out = std::to_string(line);
		if (column != 0) { out += ":" + std::to_string(column); }
		return out + ": " + msg;
	}

	std::size_t line_;
	std::size_t column_;
};

class timeout_error : public std::runtime_error
{
public:
	timeout_error() : std::runtime_error("deadline exceeded") { }
};

/// Cooperative time budget polled by the decision procedures between
/// worklist iterations.
class deadline
{
public:
	using clock = std::chrono::steady_clock;

	deadline() = default;

	static deadline never() { return deadline(); }

	static deadline after(std::chrono::milliseconds budget)
	{
		deadline d;
		d.limited_ = true;
		d.at_ = clock::now() + budget;
		return d;
	}

	static deadline after_ms(long long ms) { return after(std::chrono::milliseconds(ms)); }

	bool expired() const { return limited_ && clock::now() >= at_; }

	void check() const
	{
		if (expired()) { throw timeout_error(); }
	}

private:
	bool limited_ = false;
	clock::time_point at_{};
};

/// Fixed-width bitset sized at runtime.  Used for final-state sets and
/// models Q -> 2.
class bitset
{
public:
	bitset() = default;
	explicit bitset(std::size_t width) : width_(width), words_((width + 63) / 64, 0) { }

	std::size_t size() const { return width_; }

	bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
	bool operator[](std::size_t i) const { return test(i); }

	void set(std::size_t i, bool value = true)
	{
		const std::uint64_t mask = std::uint64_t{1} << (i % 64);
		if (value) { words_[i / 64] |= mask; }
		else { words_[i / 64] &= ~mask; }
	}

	std::size_t count() const
	{
		std::size_t n = 0;
		for (auto w : words_) { n += static_cast<std::size_t>(std::popcount(w)); }
		return n;
	}

	bool any() const
	{
		return std::any_of(words_.begin(), words_.end(), [](auto w) { return w != 0; });
	}

	void resize(std::size_t width)
	{
		width_ = width;
		words_.resize((width + 63) / 64, 0);
		if (width % 64 != 0 && !words_.empty()) {
			words_.back() &= (std::uint64_t{1} << (width % 64)) - 1;
		}
	}

	std::size_t hash() const
	{
		std::size_t h = width_;
		for (auto w : words_) {
			h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
		}
		return h;
	}

	bool operator==(const bitset&) const = default;

	std::string to_string() const
	{
		std::string s;
		for (std::size_t i = 0; i < width_; ++i) { s.push_back(test(i) ? '1' : '0'); }
		return s;
	}

private:
	std::size_t width_ = 0;
	std::vector<std::uint64_t> words_;
};

struct bitset_hash
{
	std::size_t operator()(const bitset& b) const { return b.hash(); }
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v)
{
	return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

} // namespace safa

#endif // SAFA_COMMON_HH_
