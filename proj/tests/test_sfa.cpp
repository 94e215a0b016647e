#include <catch_amalgamated.hpp>

#include <set>

#include <safa/equivalence.hh>
#include <safa/io.hh>
#include <safa/reverse_dfa.hh>
#include <safa/sfa.hh>

#include "oracles.hh"

using namespace safa;

namespace
{

const std::string data_dir = SAFA_DATA_DIR;

using isfa = sfa<interval_algebra>;

isfa a_star(const std::shared_ptr<interval_algebra>& alg)
{
	bitset f(1);
	f.set(0);
	return isfa(alg, 1, {0}, f, {{0, alg->singleton(0), 0}});
}

isfa a_star_a_star(const std::shared_ptr<interval_algebra>& alg)
{
	bitset f(2);
	f.set(0);
	f.set(1);
	return isfa(alg, 2, {0}, f, {{0, alg->singleton(0), 0}, {0, alg->singleton(0), 1}, {1, alg->singleton(0), 1}});
}

isfa a_plus(const std::shared_ptr<interval_algebra>& alg)
{
	bitset f(2);
	f.set(1);
	return isfa(alg, 2, {0}, f, {{0, alg->singleton(0), 1}, {1, alg->singleton(0), 1}});
}

isfa random_sfa(oracle::rng_t& rng, const std::shared_ptr<interval_algebra>& alg, std::size_t n)
{
	std::vector<isfa::edge> edges;
	for (state_id s = 0; s < n; ++s) {
		for (std::size_t k = oracle::pick(rng, 4); k > 0; --k) {
			edges.push_back({s, oracle::random_interval_guard(rng, *alg), static_cast<state_id>(oracle::pick(rng, n))});
		}
	}
	bitset f(n);
	for (std::size_t s = 0; s < n; ++s) { f.set(s, oracle::coin(rng, 0.4)); }
	std::vector<state_id> init{static_cast<state_id>(oracle::pick(rng, n))};
	if (oracle::coin(rng, 0.3)) { init.push_back(static_cast<state_id>(oracle::pick(rng, n))); }
	return isfa(alg, n, init, f, std::move(edges));
}

} // namespace

TEST_CASE("s-FA equivalence on classic identities", "[sfa]")
{
	auto alg = std::make_shared<interval_algebra>(3);
	REQUIRE(sfa_equiv(a_star(alg), a_star(alg)).equivalent);
	REQUIRE(sfa_equiv(a_star(alg), a_star_a_star(alg)).equivalent);
	const auto r = sfa_equiv(a_plus(alg), a_star(alg));
	REQUIRE_FALSE(r.equivalent);
	REQUIRE(r.counterexample == std::vector<codepoint>{});
	for (const auto& w : oracle::all_words<codepoint>(4, 4)) {
		REQUIRE(sfa_accepts(a_star(alg), w) == sfa_accepts(a_star_a_star(alg), w));
	}
	auto other = std::make_shared<interval_algebra>(3);
	REQUIRE_THROWS_AS(sfa_equiv(a_star(alg), a_star(other)), usage_error);
}

TEST_CASE("deterministic flag is validated", "[sfa]")
{
	auto alg = std::make_shared<interval_algebra>(3);
	bitset f(2);
	REQUIRE_THROWS_AS(isfa(alg, 2, {0}, f, {{0, alg->range(0, 2), 0}, {0, alg->range(2, 3), 1}}, true), usage_error);
	REQUIRE_THROWS_AS(isfa(alg, 2, {0, 1}, f, {}, true), usage_error);
	REQUIRE_NOTHROW(isfa(alg, 2, {0}, f, {{0, alg->range(0, 1), 0}, {0, alg->range(2, 3), 1}}, true));
}

TEST_CASE("intersection and determinization", "[sfa]")
{
	auto alg = std::make_shared<interval_algebra>(3);
	oracle::rng_t rng(31);
	for (int trial = 0; trial < 100; ++trial) {
		const auto a = random_sfa(rng, alg, 1 + oracle::pick(rng, 4));
		const auto b = random_sfa(rng, alg, 1 + oracle::pick(rng, 4));
		const auto p = sfa_intersect(a, b);
		REQUIRE(p.state_count() <= a.state_count() * b.state_count());
		const auto d = determinize(a);
		REQUIRE(d.is_deterministic());
		for (state_id s = 0; s < d.state_count(); ++s) {
			auto all = alg->bot();
			for (const auto& e : d.edges()) {
				if (e.source == s) { all = alg->disj(all, e.guard); }
			}
			REQUIRE(all == alg->top());
		}
		for (int k = 0; k < 40; ++k) {
			const auto w = oracle::random_word<codepoint>(rng, 4, 8);
			REQUIRE(sfa_accepts(p, w) == (sfa_accepts(a, w) && sfa_accepts(b, w)));
			REQUIRE(sfa_accepts(d, w) == sfa_accepts(a, w));
			REQUIRE(sfa_accepts(sfa_intersect(a, a), w) == sfa_accepts(a, w));
		}
		const auto r = sfa_equiv(a, b);
		// the s-AFA embedding decides the same question
		const auto j = join(to_afa(a), to_afa(b));
		const auto c = config_equiv(j.result, j.lhs, j.rhs);
		REQUIRE(r.equivalent == c.equivalent);
		if (!r.equivalent) { REQUIRE(sfa_accepts(a, *r.counterexample) != sfa_accepts(b, *r.counterexample)); }
		const auto back = as_sfa(j.result, j.lhs);
		REQUIRE(back);
		REQUIRE(sfa_equiv(*back, a).equivalent);
	}
}

TEST_CASE("reverse DFA recognizes the reversed language", "[sfa]")
{
	oracle::rng_t rng(41);
	const auto words = oracle::all_words<codepoint>(3, 4);
	for (int trial = 0; trial < 40; ++trial) {
		auto alg = std::make_shared<interval_algebra>(2);
		auto st = std::make_shared<pbf_store>();
		oracle::gen_options g;
		g.states = 1 + oracle::pick(rng, 5);
		const auto m = oracle::random_interval_automaton(rng, alg, st, g);
		reverse_dfa<interval_algebra> d(reverse(m));
		REQUIRE(d.model(d.initial()) == m.final_states());
		REQUIRE(d.value(d.initial(), m.initial()) == accepts(m, std::vector<codepoint>{}));
		for (const auto& w : words) {
			std::size_t s = d.initial();
			for (codepoint c : w) {
				std::optional<std::size_t> next;
				for (const auto& e : d.successors(s)) {
					if (alg->member(c, d.class_predicate(e.cls))) {
						REQUIRE_FALSE(next);
						next = e.target;
					}
				}
				REQUIRE(next);
				s = *next;
			}
			std::vector<codepoint> rev(w.rbegin(), w.rend());
			REQUIRE(d.value(s, m.initial()) == accepts(m, rev));
		}
	}
}

TEST_CASE("reverse emptiness on fixed inputs", "[sfa]")
{
	load_context ctx;
	const auto ex = std::get<automaton<interval_algebra>>(load_automaton(data_dir + "/automata/worked_example.safa", ctx));
	reverse_dfa<interval_algebra> d(ex);
	REQUIRE(d.model(0).count() == 5);
	REQUIRE(d.value(0, ex.initial()));
	const auto r = reverse_empty(ex);
	REQUIRE_FALSE(r.holds);
	REQUIRE(r.counterexample == std::vector<codepoint>{});

	load_context ctx2;
	const auto none = std::get<automaton<interval_algebra>>(load_automaton(data_dir + "/automata/empty_initial.safa", ctx2));
	REQUIRE(reverse_empty(none).holds);
}
