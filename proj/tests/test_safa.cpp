#include <catch_amalgamated.hpp>

#include <safa/automaton.hh>
#include <safa/io.hh>

#include "oracles.hh"

using namespace safa;

namespace
{

const std::string data_dir = SAFA_DATA_DIR;

automaton<interval_algebra> worked_example()
{
	load_context ctx;
	return std::get<automaton<interval_algebra>>(load_automaton(data_dir + "/automata/worked_example.safa", ctx));
}

enum : state_id { x = 0, y = 1, z = 2, w = 3, v = 4 };

/// Guards of state s as predicates over a small domain, for partition checks.
template <class A>
bool partitions(const automaton<A>& m, state_id s)
{
	A& alg = m.algebra();
	auto all = alg.bot();
	const auto& out = m.outgoing(s);
	for (std::size_t i = 0; i < out.size(); ++i) {
		const auto& gi = m.transitions()[out[i]].guard;
		for (std::size_t j = i + 1; j < out.size(); ++j) {
			if (alg.is_sat(alg.conj(gi, m.transitions()[out[j]].guard))) { return false; }
		}
		all = alg.disj(all, gi);
	}
	return !alg.is_sat(alg.negate(all));
}

template <class A>
automaton<A> build(std::shared_ptr<A> alg, std::shared_ptr<pbf_store> st, std::size_t n, pbf init,
                   std::vector<state_id> finals, std::vector<transition<A>> t)
{
	bitset f(n);
	for (state_id s : finals) { f.set(s); }
	return automaton<A>(std::move(alg), std::move(st), n, init, std::move(f), std::move(t));
}

} // namespace

TEST_CASE("worked example: acceptance and per-character steps", "[safa]")
{
	const auto m = worked_example();
	auto& st = m.store();
	auto& alg = m.algebra();
	REQUIRE(m.state_count() == 5);
	REQUIRE(accepts(m, std::vector<codepoint>{}));
	REQUIRE(accepts(m, std::vector<codepoint>{0}));

	const state_id vw[] = {w, v};
	const auto s0 = delta_on_char(m, 0, std::span<const state_id>(vw));
	REQUIRE(s0.successor(v) == st.disj(st.state(x), st.state(y)));
	REQUIRE(s0.successor(w) == st.state(z));
	REQUIRE(s0.cls == alg.singleton(0));

	const auto s5 = delta_on_char(m, 5, std::span<const state_id>(vw));
	REQUIRE(s5.successor(v) == st.conj(st.state(z), st.state(w)));
	REQUIRE(s5.successor(w) == st.conj(st.disj(st.state(y), st.state(x)), st.state(v)));
	REQUIRE(s5.cls == alg.negate(alg.singleton(0)));

	const auto none = delta_on_char(m, 3, std::span<const state_id>());
	REQUIRE(none.successors.empty());
	REQUIRE(none.cls == alg.top());
	REQUIRE_THROWS_AS(accepts(m, std::vector<codepoint>{0x110000}), usage_error);
}

TEST_CASE("acceptance agrees with the reference evaluator", "[safa]")
{
	oracle::rng_t rng(101);
	const auto words = oracle::all_words<codepoint>(3, 5);
	for (int trial = 0; trial < 60; ++trial) {
		auto alg = std::make_shared<interval_algebra>(2);
		auto st = std::make_shared<pbf_store>();
		oracle::gen_options g;
		g.states = 1 + oracle::pick(rng, 5);
		const auto m = oracle::random_interval_automaton(rng, alg, st, g);
		for (const auto& word : words) { REQUIRE(accepts(m, word) == oracle::ref_accepts(m, m.initial(), word)); }
	}
}

TEST_CASE("initial false accepts nothing", "[safa]")
{
	auto alg = std::make_shared<interval_algebra>(3);
	auto st = std::make_shared<pbf_store>();
	const auto m = build<interval_algebra>(alg, st, 1, pbf_store::ff, {0}, {{0, alg->top(), st->state(0)}});
	oracle::rng_t rng(1);
	for (int i = 0; i < 50; ++i) { REQUIRE_FALSE(accepts(m, oracle::random_word<codepoint>(rng, 4, 6))); }
}

TEST_CASE("construction validates and merges", "[safa]")
{
	auto alg = std::make_shared<interval_algebra>(200);
	auto other = std::make_shared<interval_algebra>(200);
	auto st = std::make_shared<pbf_store>();
	const auto m = build<interval_algebra>(alg, st, 2, st->state(0), {1},
		{{0, alg->range(97, 100), st->state(1)}, {0, alg->range(101, 122), st->state(1)}, {0, alg->bot(), st->state(0)}});
	REQUIRE(m.transitions().size() == 1);
	REQUIRE(m.transitions()[0].guard == alg->range(97, 122));
	REQUIRE_THROWS_AS(build<interval_algebra>(alg, st, 2, st->state(2), {}, {}), usage_error);
	REQUIRE_THROWS_AS(build<interval_algebra>(alg, st, 2, st->state(0), {}, {{2, alg->top(), st->state(0)}}), usage_error);
	REQUIRE_THROWS_AS(build<interval_algebra>(alg, st, 2, st->state(0), {}, {{0, other->top(), st->state(0)}}), usage_error);
}

TEST_CASE("normalize: hand-computed minterms", "[safa]")
{
	auto alg = std::make_shared<interval_algebra>(200);
	auto st = std::make_shared<pbf_store>();
	const pbf q = st->state(1), q1 = st->state(1), q2 = st->state(2);

	const auto m1 = normalize(build<interval_algebra>(alg, st, 2, st->state(0), {1}, {{0, alg->range(97, 122), q}}));
	REQUIRE(m1.is_normal());
	REQUIRE(m1.outgoing(0).size() == 2);
	for (std::size_t idx : m1.outgoing(0)) {
		const auto& t = m1.transitions()[idx];
		if (t.target == q) {
			REQUIRE(t.guard == alg->range(97, 122));
		} else {
			REQUIRE(t.target == pbf_store::ff);
			REQUIRE(t.guard == alg->negate(alg->range(97, 122)));
		}
	}

	const auto m2 = normalize(build<interval_algebra>(alg, st, 3, st->state(0), {1, 2},
		{{0, alg->range(0, 10), q1}, {0, alg->range(5, 20), q2}}));
	std::map<pbf, interval_predicate> by_target;
	for (std::size_t idx : m2.outgoing(0)) { by_target.emplace(m2.transitions()[idx].target, m2.transitions()[idx].guard); }
	REQUIRE(by_target.size() == 4);
	REQUIRE(by_target.at(q1) == alg->range(0, 4));
	REQUIRE(by_target.at(st->disj(q1, q2)) == alg->range(5, 10));
	REQUIRE(by_target.at(q2) == alg->range(11, 20));
	REQUIRE(by_target.at(pbf_store::ff) == alg->from_intervals({{21, 200}}));
	REQUIRE(partitions(m2, 0));
}

TEST_CASE("normalize partitions and preserves the language", "[safa]")
{
	oracle::rng_t rng(7);
	const auto words = oracle::all_words<codepoint>(4, 4);
	for (int trial = 0; trial < 100; ++trial) {
		auto alg = std::make_shared<interval_algebra>(3);
		auto st = std::make_shared<pbf_store>();
		oracle::gen_options g;
		g.states = 1 + oracle::pick(rng, 5);
		const auto m = oracle::random_interval_automaton(rng, alg, st, g);
		const auto nm = normalize(m);
		for (state_id s = 0; s < nm.state_count(); ++s) { REQUIRE(partitions(nm, s)); }
		for (const auto& word : words) { REQUIRE(accepts(m, word) == accepts(nm, word)); }
		REQUIRE(normalize(nm).transitions().size() == nm.transitions().size());
	}
}

TEST_CASE("complement: universal automaton and double complement", "[safa]")
{
	auto alg = std::make_shared<interval_algebra>(3);
	auto st = std::make_shared<pbf_store>();
	const auto all = build<interval_algebra>(alg, st, 1, st->state(0), {0}, {{0, alg->top(), st->state(0)}});
	const auto none = complement(all);
	oracle::rng_t rng(2);
	REQUIRE_FALSE(accepts(none, std::vector<codepoint>{}));
	for (int i = 0; i < 50; ++i) { REQUIRE_FALSE(accepts(none, oracle::random_word<codepoint>(rng, 4, 8))); }

	for (int trial = 0; trial < 50; ++trial) {
		oracle::gen_options g;
		g.states = 1 + oracle::pick(rng, 4);
		const auto m = oracle::random_interval_automaton(rng, alg, st, g);
		const auto c = complement(m);
		const auto cc = complement(c);
		for (int i = 0; i < 40; ++i) {
			const auto word = oracle::random_word<codepoint>(rng, 4, 8);
			REQUIRE(accepts(c, word) == !accepts(m, word));
			REQUIRE(accepts(cc, word) == accepts(m, word));
		}
	}
}

TEST_CASE("union and intersection", "[safa]")
{
	auto alg = std::make_shared<interval_algebra>(3);
	auto st = std::make_shared<pbf_store>();
	oracle::rng_t rng(9);
	const auto nothing = build<interval_algebra>(alg, st, 1, pbf_store::ff, {0}, {});
	for (int trial = 0; trial < 100; ++trial) {
		oracle::gen_options g;
		g.states = 1 + oracle::pick(rng, 4);
		const auto m1 = oracle::random_interval_automaton(rng, alg, st, g);
		const auto m2 = oracle::random_interval_automaton(rng, alg, std::make_shared<pbf_store>(), g);
		const auto u = union_of(m1, m2), i = intersection_of(m1, m2), u0 = union_of(m1, nothing);
		REQUIRE(u.state_count() == m1.state_count() + m2.state_count());
		for (int k = 0; k < 30; ++k) {
			const auto word = oracle::random_word<codepoint>(rng, 4, 8);
			REQUIRE(accepts(u, word) == (accepts(m1, word) || accepts(m2, word)));
			REQUIRE(accepts(i, word) == (accepts(m1, word) && accepts(m2, word)));
			REQUIRE(accepts(u0, word) == accepts(m1, word));
		}
	}
	auto other = std::make_shared<interval_algebra>(3);
	const auto foreign = build<interval_algebra>(other, st, 1, pbf_store::ff, {}, {});
	REQUIRE_THROWS_AS(union_of(nothing, foreign), usage_error);
}

TEST_CASE("three-way intersection conjoins the initial states", "[safa]")
{
	auto alg = std::make_shared<interval_algebra>(3);
	auto st = std::make_shared<pbf_store>();
	const auto a = build<interval_algebra>(alg, st, 1, st->state(0), {0}, {{0, alg->top(), st->state(0)}});
	const auto m = intersection_of(intersection_of(a, a), a);
	REQUIRE(m.initial() == st->conj(st->conj(st->state(0), st->state(1)), st->state(2)));
}

TEST_CASE("prune removes useless states", "[safa]")
{
	auto alg = std::make_shared<interval_algebra>(3);
	auto st = std::make_shared<pbf_store>();
	const pbf q0 = st->state(0), q1 = st->state(1), dead = st->state(2);

	// state 2 is isolated and non-final
	const auto iso = build<interval_algebra>(alg, st, 3, q0, {1}, {{0, alg->top(), q1}, {1, alg->top(), q0}});
	const auto p1 = prune(iso);
	REQUIRE(p1.state_count() == 2);

	// state 2 is reachable but never reaches a final state
	const auto m = build<interval_algebra>(alg, st, 3, q0, {1},
		{{0, alg->singleton(0), st->conj(q1, dead)}, {0, alg->singleton(1), q1}, {2, alg->top(), dead}});
	const auto pr = prune_from(m, std::span<const pbf>(std::vector<pbf>{q0}));
	REQUIRE(pr.result.state_count() == 2);
	REQUIRE_FALSE(pr.mapping[2].has_value());
	REQUIRE(pr.translate(st->conj(q1, dead)) == pbf_store::ff);
	for (const auto& t : pr.result.transitions()) { REQUIRE(t.target != st->conj(q1, dead)); }

	// all states live: nothing removed
	const auto live = build<interval_algebra>(alg, st, 2, q0, {1}, {{0, alg->top(), q1}, {1, alg->top(), q0}});
	REQUIRE(prune(live).state_count() == 2);
	REQUIRE(prune(live).transitions().size() == 2);

	// a true target leads to acceptance
	const auto tt = build<interval_algebra>(alg, st, 1, q0, {}, {{0, alg->singleton(2), pbf_store::tt}});
	REQUIRE(prune(tt).state_count() == 1);
	REQUIRE(accepts(prune(tt), std::vector<codepoint>{2, 0, 1}));

	oracle::rng_t rng(4);
	for (int trial = 0; trial < 100; ++trial) {
		oracle::gen_options g;
		g.states = 1 + oracle::pick(rng, 6);
		g.final_prob = 0.2;
		const auto r = oracle::random_interval_automaton(rng, alg, st, g);
		const auto p = prune(r);
		REQUIRE(p.state_count() <= r.state_count());
		for (int k = 0; k < 30; ++k) {
			const auto word = oracle::random_word<codepoint>(rng, 4, 7);
			REQUIRE(accepts(p, word) == accepts(r, word));
		}
	}
}

TEST_CASE("reverse hands the automaton through unchanged", "[safa]")
{
	const auto m = worked_example();
	REQUIRE(&reverse(m) == &m);
}

TEST_CASE("text format: parse, errors and round trip", "[safa]")
{
	load_context ctx;
	const auto a = std::get<automaton<interval_algebra>>(parse_automaton(
		"safa algebra=interval max=200   # comment\n"
		"states 3\n"
		"initial q0 & (1 | 2)\n"
		"final 1 2\n"
		"0 --[97-122 48]--> 1 | (2 & 0)\n"
		"1 --true--> 1\n"
		"2 --![0-10]--> false\n",
		ctx));
	REQUIRE(a.state_count() == 3);
	REQUIRE(a.algebra().max_char() == 200);
	REQUIRE(a.store().to_string(a.initial()) == "0 & (1 | 2)");
	REQUIRE(a.transitions().size() == 3);
	REQUIRE(a.algebra().to_string(a.transitions()[0].guard) == "[48 97-122]");

	load_context ctx2;
	const auto b = std::get<automaton<interval_algebra>>(parse_automaton(to_text(a), ctx2));
	oracle::rng_t rng(8);
	for (int k = 0; k < 200; ++k) {
		std::vector<codepoint> word(oracle::pick(rng, 6));
		for (auto& c : word) { c = static_cast<codepoint>(oracle::coin(rng) ? 97 + oracle::pick(rng, 3) : oracle::pick(rng, 201)); }
		REQUIRE(accepts(a, word) == accepts(b, word));
	}

	auto error_at = [](const std::string& text) -> std::pair<std::size_t, std::size_t> {
		load_context c;
		try {
			parse_automaton(text, c);
		} catch (const parse_error& e) {
			return {e.line(), e.column()};
		}
		return {0, 0};
	};
	REQUIRE(error_at("safa algebra=interval\nstates 2\ninitial 0\n0 --[1-]--> 1\n") == std::pair<std::size_t, std::size_t>{4, 8});
	REQUIRE(error_at("safa algebra=interval\nstates 2\ninitial 5\n").first == 3);
	REQUIRE(error_at("safa algebra=bv atoms=p\nstates 1\ninitial 0\n0 --r--> 0\n").first == 4);
	REQUIRE(error_at("safa algebra=foo\n").first == 1);
	REQUIRE(error_at("safa algebra=interval\ninitial 0\n").first == 2);

	// a second file reuses the algebra when the header agrees
	REQUIRE_THROWS_AS(parse_automaton("safa algebra=interval\nstates 1\ninitial 0\n", ctx), usage_error);
	REQUIRE_NOTHROW(parse_automaton("safa algebra=interval max=200\nstates 1\ninitial 0\n", ctx));
}

TEST_CASE("bitvector automata from text", "[safa]")
{
	load_context ctx;
	const auto m = std::get<automaton<bv_algebra>>(load_automaton(data_dir + "/automata/bv_alternating.safa", ctx));
	REQUIRE(m.algebra().atoms() == std::vector<std::string>{"p", "q"});
	REQUIRE(accepts(m, std::vector<std::uint64_t>{0b01, 0b11}));
	REQUIRE_FALSE(accepts(m, std::vector<std::uint64_t>{0b01, 0b01}));
	REQUIRE_FALSE(accepts(m, std::vector<std::uint64_t>{0b10, 0b11}));
	REQUIRE_FALSE(accepts(m, std::vector<std::uint64_t>{}));
}
