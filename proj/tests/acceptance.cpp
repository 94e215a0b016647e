// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <safa/equivalence.hh>
#include <safa/io.hh>
#include <safa/reverse_dfa.hh>
#include <safa/sfa.hh>

#include "driver.hh"
#include "oracles.hh"

using namespace safa;
using namespace safa::cli;

namespace
{

const std::string data_dir = SAFA_DATA_DIR;
using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t)
{
	return std::chrono::duration<double, std::milli>(clock_type::now() - t).count();
}

struct verdict
{
	bool ok = true;
	std::string reason;
	std::ostringstream detail;

	void fail(const std::string& why)
	{
		if (ok) { reason = why; }
		ok = false;
	}
};

// Counterexamples collected from every criterion, re-verified by C9.
struct cex_ledger
{
	std::size_t checked = 0;
	std::size_t invalid = 0;
	std::vector<std::string> samples;

	void record(bool valid, const std::string& where)
	{
		++checked;
		if (!valid) {
			++invalid;
			if (samples.size() < 5) { samples.push_back(where); }
		}
	}
};

cex_ledger ledger;

template <class A>
void check_cex(const automaton<A>& m, pbf p, pbf q, const std::vector<typename A::character>& w, const std::string& where)
{
	ledger.record(oracle::ref_accepts(m, p, w) != oracle::ref_accepts(m, q, w), where);
}

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

// ---------------------------------------------------------------- C1

verdict c1_worked_example()
{
	verdict v;
	const auto t0 = clock_type::now();
	load_context ctx;
	const auto m = std::get<automaton<interval_algebra>>(load_automaton(data_dir + "/automata/worked_example.safa", ctx));
	auto& st = m.store();
	auto& alg = m.algebra();
	const pbf x = st.state(0), y = st.state(1), z = st.state(2), w = st.state(3), vv = st.state(4);
	equiv_trace<interval_algebra> tr;
	const auto r = is_equivalent(m, vv, w, {}, &tr);
	const double ms = ms_since(t0);

	if (!r.equivalent) { v.fail("v and w reported inequivalent"); }
	using rel = std::vector<std::pair<pbf, pbf>>;
	if (tr.relation != rel{{vv, w}, {st.disj(x, y), z}}) { v.fail("relation differs from {(v,w),(x|y,z)}"); }
	if (tr.steps.size() != 2) {
		v.fail("expected 2 processed pairs");
	} else {
		const auto& s1 = tr.steps[0].representatives;
		const auto& s2 = tr.steps[1].representatives;
		if (s1.size() != 2 || s2.size() != 2) {
			v.fail("expected 2 representative classes per pair");
		} else {
			// classes {0} and [1,max] for (v,w); "not 1" and {1} for (x|y,z)
			if (!(s1[0].cls == alg.singleton(0) && s1[1].cls == alg.negate(alg.singleton(0)))) { v.fail("classes of (v,w)"); }
			if (!(s2[0].cls == alg.negate(alg.singleton(1)) && s2[1].cls == alg.singleton(1))) {
				v.fail("classes of (x|y,z)");
			}
			// the three closure checks that succeed
			if (!(s1[1].congruent && s1[1].lhs == st.conj(z, w) && s1[1].rhs == st.conj(st.disj(y, x), vv))) {
				v.fail("check z&w ~ (y|x)&v");
			}
			if (!(s2[0].congruent && s2[0].lhs == w && s2[0].rhs == vv)) { v.fail("check w ~ v"); }
			if (!(s2[1].congruent && s2[1].lhs == vv && s2[1].rhs == vv)) { v.fail("check v|false ~ v"); }
			if (s1[0].congruent || s1[0].lhs != st.disj(x, y) || s1[0].rhs != z) { v.fail("(x|y,z) must be enqueued"); }
		}
	}
	if (ms >= 100.0) { v.fail("took " + std::to_string(ms) + " ms"); }
	v.detail << (v.ok ? "relation {(v,w),(x|y,z)}, 2+2 classes, 3 closure checks" : "") << "; " << ms << " ms";
	return v;
}

// ---------------------------------------------------------------- C2

verdict c2_cross_engine()
{
	verdict v;
	const auto t0 = clock_type::now();
	oracle::rng_t rng(20240);
	std::size_t disagreements = 0, shaped = 0, inequivalent = 0;
	for (int trial = 0; trial < 500; ++trial) {
		auto alg = std::make_shared<interval_algebra>(3);
		auto st = std::make_shared<pbf_store>();
		oracle::gen_options g;
		g.sfa_shaped = trial % 3 == 0;
		const std::size_t n1 = 1 + oracle::pick(rng, 5);
		const std::size_t n2 = 1 + oracle::pick(rng, 10 - n1);
		g.states = n1;
		const auto m1 = oracle::random_interval_automaton(rng, alg, st, g);
		g.states = n2;
		const auto m2 = oracle::random_interval_automaton(rng, alg, std::make_shared<pbf_store>(), g);
		const auto j = join(m1, m2);
		const auto& m = j.result;

		const auto b = is_equivalent(m, j.lhs, j.rhs);
		const auto rv = reverse_equiv(m, j.lhs, j.rhs);
		bool agree = b.equivalent == rv.holds;
		if (b.counterexample) { check_cex(m, j.lhs, j.rhs, *b.counterexample, "C2 bisim"); }
		if (rv.counterexample) { check_cex(m, j.lhs, j.rhs, *rv.counterexample, "C2 reverse-sfa"); }

		// emptiness of each side
		for (pbf side : {j.lhs, j.rhs}) {
			const auto be = is_equivalent(m, side, pbf_store::ff);
			const auto re = reverse_equiv(m, side, pbf_store::ff);
			agree = agree && be.equivalent == re.holds;
			if (be.counterexample) { check_cex(m, side, pbf_store::ff, *be.counterexample, "C2 bisim empty"); }
			if (re.counterexample) { check_cex(m, side, pbf_store::ff, *re.counterexample, "C2 reverse empty"); }
		}

		const auto a1 = as_sfa(m, j.lhs);
		const auto a2 = as_sfa(m, j.rhs);
		if (a1 && a2) {
			++shaped;
			const auto s = sfa_equiv(*a1, *a2);
			agree = agree && s.equivalent == b.equivalent;
			if (s.counterexample) { check_cex(m, j.lhs, j.rhs, *s.counterexample, "C2 sfa-eq"); }
		}
		if (!b.equivalent) { ++inequivalent; }
		if (!agree) { ++disagreements; }
	}
	const double ms = ms_since(t0);
	if (disagreements != 0) { v.fail(std::to_string(disagreements) + " disagreements"); }
	if (ms >= 60000.0) { v.fail("took " + std::to_string(ms) + " ms"); }
	v.detail << "500 pairs (" << shaped << " s-FA-shaped, " << inequivalent << " inequivalent), " << disagreements
	         << " disagreements; " << ms << " ms";
	return v;
}

// ---------------------------------------------------------------- C3

verdict c3_boolean_laws()
{
	verdict v;
	oracle::rng_t rng(303);
	std::size_t failures = 0;
	for (int trial = 0; trial < 1000; ++trial) {
		auto alg = std::make_shared<interval_algebra>(3);
		auto st = std::make_shared<pbf_store>();
		oracle::gen_options g;
		g.states = 1 + oracle::pick(rng, 4);
		const auto m1 = oracle::random_interval_automaton(rng, alg, st, g);
		g.states = 1 + oracle::pick(rng, 4);
		const auto m2 = oracle::random_interval_automaton(rng, alg, st, g);
		const auto w = oracle::random_word<codepoint>(rng, 4, 8);
		const bool a = oracle::ref_accepts(m1, m1.initial(), w);
		const bool b = oracle::ref_accepts(m2, m2.initial(), w);
		const auto c1 = complement(m1), c2 = complement(m2);
		bool ok = accepts(union_of(m1, m2), w) == (a || b);
		ok = ok && accepts(intersection_of(m1, m2), w) == (a && b);
		ok = ok && accepts(c1, w) == !a;
		ok = ok && accepts(complement(union_of(m1, m2)), w) == accepts(intersection_of(c1, c2), w);
		ok = ok && accepts(complement(intersection_of(m1, m2)), w) == accepts(union_of(c1, c2), w);
		ok = ok && accepts(complement(union_of(m1, m2)), w) == (!a && !b);
		ok = ok && accepts(normalize(m1), w) == a;
		ok = ok && accepts(prune(m1), w) == a;
		ok = ok && accepts(prune(normalize(m2)), w) == b;
		if (!ok) { ++failures; }
	}
	if (failures != 0) { v.fail(std::to_string(failures) + " failing trials"); }
	v.detail << "1000 trials, " << failures << " failures";
	return v;
}

// ---------------------------------------------------------------- C4

verdict c4_normal_form()
{
	verdict v;
	oracle::rng_t rng(404);
	std::size_t failures = 0;
	for (int trial = 0; trial < 200; ++trial) {
		bool ok = true;
		if (trial % 2 == 0) {
			auto alg = std::make_shared<interval_algebra>(1 + static_cast<codepoint>(oracle::pick(rng, 6)));
			oracle::gen_options g;
			g.states = 1 + oracle::pick(rng, 6);
			const auto nm = normalize(oracle::random_interval_automaton(rng, alg, std::make_shared<pbf_store>(), g));
			for (state_id s = 0; s < nm.state_count(); ++s) { ok = ok && partitions(nm, s); }
		} else {
			auto alg = std::make_shared<bv_algebra>(std::vector<std::string>{"p", "q", "r"});
			oracle::gen_options g;
			g.states = 1 + oracle::pick(rng, 6);
			const auto nm = normalize(oracle::random_bv_automaton(rng, alg, std::make_shared<pbf_store>(), g));
			for (state_id s = 0; s < nm.state_count(); ++s) { ok = ok && partitions(nm, s); }
		}
		if (!ok) { ++failures; }
	}
	if (failures != 0) { v.fail(std::to_string(failures) + " automata not in normal form"); }
	v.detail << "200 automata (interval and bitvector), " << failures << " failures";
	return v;
}

// ---------------------------------------------------------------- C5

verdict c5_congruence_closure()
{
	verdict v;
	const auto t0 = clock_type::now();
	oracle::free_lattice3 lat;
	pbf_store st;
	std::vector<pbf> pool(lat.size());
	for (std::size_t i = 0; i < lat.size(); ++i) {
		pbf p = pbf_store::ff;
		for (unsigned x = 0; x < 8; ++x) {
			if (!((lat.table(i) >> x) & 1U)) { continue; }
			pbf cube = pbf_store::tt;
			for (unsigned s = 0; s < 3; ++s) {
				if ((x >> s) & 1U) { cube = st.conj(cube, st.state(s)); }
			}
			p = st.disj(p, cube);
		}
		pool[i] = p;
	}
	const std::size_t n = pool.size();
	std::vector<std::pair<std::size_t, std::size_t>> pairs;
	for (std::size_t a = 0; a < n; ++a) {
		for (std::size_t b = a; b < n; ++b) { pairs.emplace_back(a, b); }
	}
	std::vector<std::vector<std::pair<std::size_t, std::size_t>>> relations{{}};
	for (std::size_t i = 0; i < pairs.size(); ++i) {
		relations.push_back({pairs[i]});
		for (std::size_t j = i + 1; j < pairs.size(); ++j) { relations.push_back({pairs[i], pairs[j]}); }
	}
	std::size_t disagreements = 0, queries = 0;
	for (const auto& rel : relations) {
		congruence_context ctx(st);
		for (auto [a, b] : rel) { ctx.assert_pair(pool[a], pool[b]); }
		const auto cls = lat.congruence(rel);
		for (std::size_t a = 0; a < n; ++a) {
			for (std::size_t b = a + 1; b < n; ++b) {
				++queries;
				if (ctx.in_closure(pool[a], pool[b]) != (cls[a] == cls[b])) { ++disagreements; }
			}
		}
	}
	const double ms = ms_since(t0);
	if (disagreements != 0) { v.fail(std::to_string(disagreements) + " disagreements"); }
	if (ms >= 30000.0) { v.fail("took " + std::to_string(ms) + " ms"); }
	v.detail << relations.size() << " relations, " << queries << " queries, " << disagreements << " disagreements; "
	         << ms << " ms";
	return v;
}

// ---------------------------------------------------------------- C6

verdict c6_sat_reduction()
{
	verdict v;
	oracle::rng_t rng(606);
	std::size_t mismatches = 0, sat = 0;
	for (int trial = 0; trial < 200; ++trial) {
		const auto f = oracle::random_3cnf(rng, 6, 40);
		const bool expect = oracle::truth_table_sat(f);
		sat += expect ? 1 : 0;
		if (satisfiable_by_congruence(f) != expect) { ++mismatches; }
	}
	if (mismatches != 0) { v.fail(std::to_string(mismatches) + " mismatches"); }
	v.detail << "200 formulas (" << sat << " satisfiable), " << mismatches << " mismatches";
	return v;
}

// ---------------------------------------------------------------- C7

verdict c7_ltlf()
{
	verdict v;
	oracle::rng_t rng(707);
	std::size_t disagreements = 0, sat = 0, drawn = 0;
	run_options opts;
	opts.timeout_ms = random_batch_timeout_ms;
	while (drawn < 300) {
		const auto phi = random_ltlf(rng, 1 + oracle::pick(rng, 8), 1 + static_cast<unsigned>(oracle::pick(rng, 3)));
		if (phi.store->tree_size(phi.root) > 8 || phi.store->next_depth(phi.root) > 5) { continue; }
		++drawn;
		const unsigned k = static_cast<unsigned>(phi.store->atoms().size());
		oracle::trace_enumerator en(*phi.store, k);
		const bool expect = en.find_model(phi.root, 6).has_value();
		sat += expect ? 1 : 0;
		const auto a = ltlf_to_afa(phi);
		for (engine_kind e : {engine_kind::bisim, engine_kind::reverse_sfa}) {
			opts.engine = e;
			const auto o = decide_equiv(a.afa, a.traces(), pbf_store::ff, opts);
			const bool got = !o.holds;
			if (o.timed_out || got != expect) { ++disagreements; }
			if (o.counterexample) {
				const auto& t = *o.counterexample;
				check_cex(a.afa, a.traces(), pbf_store::ff, t, "C7 automaton");
				ledger.record(!t.empty() && oracle::ltl_holds(*phi.store, phi.root, t, 0), "C7 trace semantics");
			}
		}
	}
	// fixed cases through the command layer
	opts.engine = engine_kind::bisim;
	const std::vector<std::pair<std::string, std::string>> fixed{
		{"false", "unsat"}, {"G p", "sat"}, {"(F p) & (G !p)", "unsat"}, {"!(X true)", "sat"}};
	for (const auto& [f, expect] : fixed) {
		const auto r = cmd_ltlf_sat(f, opts);
		if (r.verdict != expect) { v.fail(f + " gave " + r.verdict); }
		if (r.counterexample_verified) { ledger.record(*r.counterexample_verified, "C7 " + f); }
	}
	// L(X true) differs from L(true): the more-input state accepts exactly
	// the nonempty traces, the language of true
	{
		const auto ax = ltlf_to_afa(parse_ltlf("X true"));
		const pbf lhs = ax.traces();
		const pbf rhs = ax.afa.store().state(ax.more_input);
		const auto r = is_equivalent(ax.afa, lhs, rhs);
		if (r.equivalent || !r.counterexample || r.counterexample->size() != 1) {
			v.fail("X true vs true not separated by a length-1 trace");
		} else {
			check_cex(ax.afa, lhs, rhs, *r.counterexample, "C7 X true vs true");
		}
		if (!ltlf_holds(parse_ltlf("true"), std::vector<std::uint64_t>{0}) ||
		    ltlf_holds(parse_ltlf("X true"), std::vector<std::uint64_t>{0})) {
			v.fail("length-1 trace semantics");
		}
	}
	if (disagreements != 0) { v.fail(std::to_string(disagreements) + " disagreements"); }
	v.detail << drawn << " formulas (" << sat << " sat) x 2 engines, " << disagreements
	         << " disagreements; fixed cases and X true vs true";
	return v;
}

// ---------------------------------------------------------------- C8

verdict c8_regex_forced()
{
	verdict v;
	const auto t0 = clock_type::now();
	bench_settings s;
	s.jobs = std::max(1U, std::thread::hardware_concurrency());
	const auto rep = cmd_bench(data_dir + "/bench/regex_forced.json", s);
	const double ms = ms_since(t0);
	std::size_t bad = 0;
	std::map<std::string, std::size_t> explored;
	for (const auto& r : rep.records) {
		if (r.verdict != "equivalent" || r.timeout || r.timeout_ms != 20000) { ++bad; }
		explored[r.engine] += r.explored;
	}
	const std::size_t pairs = 50 * 49 / 2;
	if (rep.records.size() != 2 * pairs) { v.fail("expected " + std::to_string(2 * pairs) + " records"); }
	if (bad != 0) { v.fail(std::to_string(bad) + " cases not equivalent within the timeout"); }
	for (const char* e : {"bisim", "sfa-eq"}) {
		if (!rep.summary.contains(e)) {
			v.fail(std::string("summary lacks ") + e);
			continue;
		}
		if (rep.summary[e]["explored_total"].get<std::size_t>() != explored[e] || explored[e] == 0) {
			v.fail(std::string("explored total inconsistent for ") + e);
		}
	}
	if (rep.scatter.size() != pairs) { v.fail("scatter size"); }
	for (const auto& pt : rep.scatter) {
		if (!pt["explored"].contains("bisim") || !pt["explored"].contains("sfa-eq")) {
			v.fail("scatter point without both engines");
			break;
		}
	}
	v.detail << pairs << " pairs, " << bad << " not equivalent; explored bisim " << explored["bisim"] << ", sfa-eq "
	         << explored["sfa-eq"] << "; " << ms << " ms";
	return v;
}

// ---------------------------------------------------------------- C9

verdict c9_counterexamples()
{
	// the bundled inequivalent examples, through the command layer
	run_options opts;
	for (engine_kind e : {engine_kind::bisim, engine_kind::reverse_sfa, engine_kind::sfa_eq}) {
		opts.engine = e;
		for (const char* f : {"spam_filter", "exclusion", "plus_star"}) {
			const auto r = cmd_regex(data_dir + "/regex/" + f + ".txt", std::nullopt, opts);
			ledger.record(r.verdict == "inequivalent" && r.counterexample_verified == true,
			              std::string("C9 regex ") + f + " " + engine_name(e));
		}
		const auto r = cmd_equiv({data_dir + "/automata/a_star.safa", data_dir + "/automata/a_plus.safa"}, std::nullopt,
		                         std::nullopt, opts);
		ledger.record(r.verdict == "inequivalent" && r.counterexample_verified == true, "C9 a* vs a+ " + engine_name(e));
	}
	verdict v;
	if (ledger.invalid != 0) {
		std::string first;
		for (const auto& s : ledger.samples) { first += (first.empty() ? "" : ", ") + s; }
		v.fail(std::to_string(ledger.invalid) + " invalid (" + first + ")");
	}
	if (ledger.checked == 0) { v.fail("no counterexamples were produced"); }
	v.detail << ledger.checked << " counterexamples re-verified, " << ledger.invalid << " invalid";
	return v;
}

} // namespace

int main()
{
	const std::vector<std::pair<std::string, std::function<verdict()>>> criteria{
		{"C1 worked example", c1_worked_example},
		{"C2 cross-engine exactness", c2_cross_engine},
		{"C3 Boolean-operation laws", c3_boolean_laws},
		{"C4 normal form", c4_normal_form},
		{"C5 congruence closure", c5_congruence_closure},
		{"C6 SAT reduction", c6_sat_reduction},
		{"C7 LTL-f trace oracle", c7_ltlf},
		{"C8 regex forced equivalence", c8_regex_forced},
		{"C9 counterexample validity", c9_counterexamples},
	};
	int failed = 0;
	for (const auto& [name, run] : criteria) {
		verdict v;
		try {
			v = run();
		} catch (const std::exception& e) {
			v.fail(std::string("exception: ") + e.what());
		}
		std::cout << (v.ok ? "PASS " : "FAIL ") << name << ": " << (v.ok ? "" : v.reason + " | ") << v.detail.str()
		          << std::endl;
		failed += v.ok ? 0 : 1;
	}
	std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
	return failed == 0 ? 0 : 1;
}
