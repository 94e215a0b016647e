#include <catch_amalgamated.hpp>

#include <safa/algebra.hh>

#include "oracles.hh"

using namespace safa;

namespace
{

std::uint32_t mask_of(const interval_algebra& alg, const interval_predicate& p)
{
	std::uint32_t m = 0;
	for (codepoint c = 0; c <= alg.max_char(); ++c) {
		if (alg.member(c, p)) { m |= 1U << c; }
	}
	return m;
}

interval_predicate from_mask(const interval_algebra& alg, std::uint32_t m)
{
	std::vector<interval_algebra::interval> ivs;
	for (codepoint c = 0; c <= alg.max_char(); ++c) {
		if ((m >> c) & 1U) { ivs.emplace_back(c, c); }
	}
	return alg.from_intervals(ivs);
}

} // namespace

TEST_CASE("interval predicates are canonical", "[algebra]")
{
	interval_algebra alg(1000);
	const auto p = alg.from_intervals({{10, 20}, {21, 30}, {5, 12}, {40, 40}});
	REQUIRE(p.intervals() == std::vector<interval_algebra::interval>{{5, 30}, {40, 40}});
	REQUIRE(alg.to_string(p) == "[5-30 40]");
	REQUIRE(alg.to_string(alg.top()) == "true");
	REQUIRE(alg.to_string(alg.bot()) == "false");
	REQUIRE(alg.from_intervals({{3, 4}, {1, 2}}) == alg.range(1, 4));
	REQUIRE(alg.from_intervals({{990, 5000}}) == alg.range(990, 1000));
}

TEST_CASE("interval operations match set semantics", "[algebra]")
{
	interval_algebra alg(7);
	oracle::rng_t rng(11);
	for (int trial = 0; trial < 2000; ++trial) {
		const std::uint32_t a = rng() & 0xFF, b = rng() & 0xFF;
		const auto pa = from_mask(alg, a), pb = from_mask(alg, b);
		REQUIRE(mask_of(alg, pa) == a);
		REQUIRE(mask_of(alg, alg.conj(pa, pb)) == (a & b));
		REQUIRE(mask_of(alg, alg.disj(pa, pb)) == (a | b));
		REQUIRE(mask_of(alg, alg.negate(pa)) == (~a & 0xFF));
		REQUIRE(mask_of(alg, minus(alg, pa, pb)) == (a & ~b & 0xFF));
		REQUIRE(alg.is_sat(pa) == (a != 0));
		if (a != 0) { REQUIRE(alg.witness(pa) == static_cast<codepoint>(__builtin_ctz(a))); }
		REQUIRE((pa == from_mask(alg, a)));
	}
}

TEST_CASE("interval algebra rejects foreign predicates and characters", "[algebra]")
{
	interval_algebra a1(100), a2(100);
	REQUIRE_THROWS_AS(a1.conj(a1.top(), a2.top()), usage_error);
	REQUIRE_THROWS_AS(a1.member(101, a1.top()), usage_error);
	REQUIRE_THROWS_AS(a1.witness(a1.bot()), usage_error);
	REQUIRE(a1.member(100, a1.top()));
	REQUIRE(interval_algebra().max_char() == 0x10FFFF);
}

TEST_CASE("bitvector predicates match truth tables", "[algebra]")
{
	bv_algebra alg({"p", "q", "r"});
	REQUIRE(alg.width() == 3);
	REQUIRE(alg.atom_index("q") == 1);
	REQUIRE(alg.atom_index("s") == -1);
	auto table = [&](const bv_predicate& x) {
		std::uint32_t m = 0;
		for (std::uint64_t c = 0; c < 8; ++c) {
			if (alg.member(c, x)) { m |= 1U << c; }
		}
		return m;
	};
	REQUIRE(table(alg.var(0)) == 0b10101010);
	REQUIRE(table(alg.var(2)) == 0b11110000);
	oracle::rng_t rng(5);
	for (int trial = 0; trial < 500; ++trial) {
		const auto a = oracle::random_bv_guard(rng, alg);
		const auto b = oracle::coin(rng) ? oracle::random_bv_guard(rng, alg) : alg.bot();
		const auto ta = table(a), tb = table(b);
		REQUIRE(table(alg.conj(a, b)) == (ta & tb));
		REQUIRE(table(alg.disj(a, b)) == (ta | tb));
		REQUIRE(table(alg.negate(a)) == (~ta & 0xFF));
		REQUIRE(alg.is_sat(b) == (tb != 0));
		REQUIRE(alg.member(alg.witness(a), a));
		// canonical: equal tables give equal nodes
		REQUIRE((alg.disj(alg.conj(a, b), alg.conj(a, alg.negate(b))) == a));
	}
	REQUIRE(alg.witness(alg.top()) == 0);
	REQUIRE(alg.witness(alg.var(1)) == 0b010);
	REQUIRE(alg.character_to_string(0b101) == "{p, r}");
	REQUIRE(alg.to_string(alg.top()) == "true");
	REQUIRE(alg.to_string(alg.bot()) == "false");
}

TEST_CASE("bitvector algebra rejects foreign predicates and wide characters", "[algebra]")
{
	bv_algebra a1({"p"}), a2({"p"});
	REQUIRE_THROWS_AS(a1.conj(a1.var(0), a2.var(0)), usage_error);
	REQUIRE_THROWS_AS(a1.member(2, a1.top()), usage_error);
	REQUIRE_THROWS_AS(a1.witness(a1.bot()), usage_error);
}
