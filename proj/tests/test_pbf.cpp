#include <catch_amalgamated.hpp>

#include <safa/pbf.hh>

#include "oracles.hh"

using namespace safa;

namespace
{

bool eval_ref(const pbf_store& st, pbf p, const bitset& g)
{
	switch (st.kind(p)) {
	case pbf_kind::ff: return false;
	case pbf_kind::tt: return true;
	case pbf_kind::state: return g.test(st.state_of(p));
	case pbf_kind::conj: return eval_ref(st, st.left(p), g) && eval_ref(st, st.right(p), g);
	case pbf_kind::disj: return eval_ref(st, st.left(p), g) || eval_ref(st, st.right(p), g);
	}
	return false;
}

bitset model(std::size_t n, std::uint64_t bits)
{
	bitset g(n);
	for (std::size_t i = 0; i < n; ++i) { g.set(i, (bits >> i) & 1U); }
	return g;
}

} // namespace

TEST_CASE("formulas are hash-consed and locally simplified", "[pbf]")
{
	pbf_store st;
	const pbf a = st.state(0), b = st.state(1), c = st.state(2);
	REQUIRE(st.state(0) == a);
	REQUIRE(st.conj(a, b) == st.conj(b, a));
	REQUIRE(st.disj(a, b) == st.disj(b, a));
	REQUIRE(st.conj(a, pbf_store::tt) == a);
	REQUIRE(st.conj(a, pbf_store::ff) == pbf_store::ff);
	REQUIRE(st.disj(a, pbf_store::tt) == pbf_store::tt);
	REQUIRE(st.disj(pbf_store::ff, a) == a);
	REQUIRE(st.conj(a, a) == a);
	const pbf shared = st.conj(a, b);
	const pbf p = st.disj(shared, st.conj(shared, c));
	REQUIRE(st.size(p) == 6); // p, a&b, (a&b)&c, a, b, c
	REQUIRE(st.states(p) == std::vector<state_id>{0, 1, 2});
	REQUIRE(st.states(pbf_store::tt).empty());
	REQUIRE(st.to_string(st.conj(st.disj(a, b), c)) == "2 & (0 | 1)");
	REQUIRE(st.to_string(p, [](state_id s) { return std::string(1, static_cast<char>('x' + s)); }) ==
	        "x & y | z & x & y");
}

TEST_CASE("eval, substitute and De Morgan agree with the recursive definition", "[pbf]")
{
	pbf_store st;
	oracle::rng_t rng(3);
	const std::size_t n = 4;
	for (int trial = 0; trial < 300; ++trial) {
		const pbf p = oracle::random_pbf(rng, st, n, 4);
		const pbf dm = st.de_morgan(p);
		const pbf sub = st.substitute(p, [&](state_id s) { return s == 0 ? st.disj(st.state(1), st.state(3)) : st.state(s); });
		for (std::uint64_t bits = 0; bits < 16; ++bits) {
			const bitset g = model(n, bits);
			const bitset ng = model(n, ~bits);
			REQUIRE(st.eval(g, p) == eval_ref(st, p, g));
			REQUIRE(st.eval(g, dm) == !eval_ref(st, p, ng));
			bitset g2 = g;
			g2.set(0, g.test(1) || g.test(3));
			REQUIRE(st.eval(g, sub) == eval_ref(st, p, g2));
		}
		REQUIRE(st.de_morgan(dm) == p);
	}
}
