/* driver.hh -- commands behind the safa command-line tool: load inputs, run
 * one engine under a time budget and produce run records.
 */

#ifndef SAFA_TOOLS_DRIVER_HH_
#define SAFA_TOOLS_DRIVER_HH_

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include <safa/equivalence.hh>
#include <safa/io.hh>
#include <safa/ltlf.hh>
#include <safa/regex.hh>
#include <safa/reverse_dfa.hh>
#include <safa/sfa.hh>

namespace safa::cli
{

using json = nlohmann::json;

enum class engine_kind { bisim, reverse_sfa, sfa_eq };

inline engine_kind parse_engine(const std::string& name)
{
	if (name == "bisim") { return engine_kind::bisim; }
	if (name == "reverse-sfa") { return engine_kind::reverse_sfa; }
	if (name == "sfa-eq") { return engine_kind::sfa_eq; }
	throw usage_error("unknown engine '" + name + "' (expected bisim, reverse-sfa or sfa-eq)");
}

inline std::string engine_name(engine_kind e)
{
	switch (e) {
	case engine_kind::bisim: return "bisim";
	case engine_kind::reverse_sfa: return "reverse-sfa";
	case engine_kind::sfa_eq: return "sfa-eq";
	}
	return "?";
}

constexpr long long default_timeout_ms = 20000;
constexpr long long random_batch_timeout_ms = 5000;

struct run_options
{
	engine_kind engine = engine_kind::bisim;
	long long timeout_ms = default_timeout_ms;
	bool prune = true;
};

/// Engines poll cooperatively, so they get a slightly smaller budget than
/// the one reported; the recorded wall time then stays within the budget.
inline deadline engine_deadline(long long timeout_ms)
{
	if (timeout_ms <= 0) { return deadline::never(); }
	return deadline::after_ms(timeout_ms - std::min(timeout_ms / 20, 250LL));
}

struct run_record
{
	std::string command;
	std::string engine;
	std::string case_id;
	std::vector<std::string> inputs;
	std::string verdict;
	std::optional<std::string> counterexample;
	std::optional<std::vector<std::uint64_t>> counterexample_codes;
	std::optional<bool> counterexample_verified;
	std::size_t explored = 0;
	std::size_t pairs_explored = 0;
	std::size_t sat_queries = 0;
	std::size_t representatives = 0;
	double wall_ms = 0.0;
	bool timeout = false;
	long long timeout_ms = 0;
	std::optional<std::string> error;

	json to_json() const
	{
		json j;
		j["command"] = command;
		j["engine"] = engine;
		j["case"] = case_id;
		j["inputs"] = inputs;
		j["verdict"] = verdict;
		j["counterexample"] = counterexample ? json(*counterexample) : json(nullptr);
		j["counterexample_codes"] = counterexample_codes ? json(*counterexample_codes) : json(nullptr);
		j["counterexample_verified"] = counterexample_verified ? json(*counterexample_verified) : json(nullptr);
		j["stats"] = {{"explored", explored},
		              {"pairs_explored", pairs_explored},
		              {"sat_queries", sat_queries},
		              {"representatives", representatives}};
		j["wall_ms"] = wall_ms;
		j["timeout"] = timeout;
		j["timeout_ms"] = timeout_ms;
		j["error"] = error ? json(*error) : json(nullptr);
		return j;
	}

	static std::vector<std::string> csv_header()
	{
		return {"case", "command", "engine", "verdict", "explored", "pairs_explored", "sat_queries",
		        "representatives", "wall_ms", "timeout", "counterexample_verified", "error"};
	}

	std::vector<std::string> csv_row() const
	{
		std::ostringstream ms;
		ms << wall_ms;
		return {case_id, command, engine, verdict, std::to_string(explored), std::to_string(pairs_explored),
		        std::to_string(sat_queries), std::to_string(representatives), ms.str(), timeout ? "1" : "0",
		        counterexample_verified ? (*counterexample_verified ? "1" : "0") : "", error.value_or("")};
	}

	/// One or two lines for terminal output.
	std::string to_text() const
	{
		std::ostringstream out;
		out << command << ": " << verdict << "  [engine " << engine << ", explored " << explored;
		if (engine == "bisim") { out << ", sat queries " << sat_queries << ", representatives " << representatives; }
		out << ", " << wall_ms << " ms]";
		if (error) { out << "\n  " << *error; }
		if (counterexample) {
			out << "\n  counterexample: \"" << *counterexample << "\"";
			if (counterexample_verified) { out << (*counterexample_verified ? " (verified)" : " (NOT verified)"); }
		}
		return out.str();
	}
};

inline std::string csv_escape(const std::string& s)
{
	if (s.find_first_of(",\"\n") == std::string::npos) { return s; }
	std::string o = "\"";
	for (char c : s) {
		if (c == '"') { o += '"'; }
		o += c;
	}
	return o + "\"";
}

inline std::string to_csv(const std::vector<run_record>& records)
{
	std::ostringstream out;
	auto row = [&](const std::vector<std::string>& cells) {
		for (std::size_t i = 0; i < cells.size(); ++i) { out << (i ? "," : "") << csv_escape(cells[i]); }
		out << '\n';
	};
	row(run_record::csv_header());
	for (const auto& r : records) { row(r.csv_row()); }
	return out.str();
}

/// Engine-independent result of one decision.
template <boolean_algebra A>
struct outcome
{
	bool holds = false;
	bool timed_out = false;
	std::optional<std::string> unsupported;
	std::optional<std::vector<typename A::character>> counterexample;
	std::size_t explored = 0;
	std::size_t pairs_explored = 0;
	std::size_t sat_queries = 0;
	std::size_t representatives = 0;
};

/// L(p) = L(q) for two configurations of m.
template <boolean_algebra A>
outcome<A> decide_equiv(const automaton<A>& m, pbf p, pbf q, const run_options& opts)
{
	outcome<A> o;
	const deadline limit = engine_deadline(opts.timeout_ms);
	switch (opts.engine) {
	case engine_kind::bisim: {
		const auto r = is_equivalent(m, p, q, equiv_options{limit, opts.prune});
		o.holds = r.equivalent;
		o.timed_out = r.timed_out;
		o.counterexample = r.counterexample;
		o.explored = o.pairs_explored = r.stats.pairs_explored;
		o.sat_queries = r.stats.sat_queries;
		o.representatives = r.stats.representatives;
		break;
	}
	case engine_kind::reverse_sfa: {
		const auto r = reverse_equiv(reverse(m), p, q, limit);
		o.holds = r.holds;
		o.timed_out = r.timed_out;
		o.counterexample = r.counterexample;
		o.explored = r.states_explored;
		break;
	}
	case engine_kind::sfa_eq: {
		const auto a = as_sfa(m, p);
		const auto b = as_sfa(m, q);
		if (!a || !b) {
			o.unsupported = "sfa-eq needs an s-FA-shaped input (single-state targets, disjunctive configurations)";
			break;
		}
		const auto r = sfa_equiv(*a, *b, limit);
		o.holds = r.equivalent;
		o.timed_out = r.timed_out;
		o.counterexample = r.counterexample;
		o.explored = r.states_explored;
		break;
	}
	}
	return o;
}

inline std::string render_word(const interval_algebra&, const std::vector<codepoint>& w)
{
	return escape_word(w);
}

inline std::string render_word(const bv_algebra& alg, const std::vector<std::uint64_t>& w)
{
	std::string s;
	for (std::size_t i = 0; i < w.size(); ++i) {
		if (i != 0) { s += ' '; }
		s += alg.character_to_string(w[i]);
	}
	return s;
}

/// Copies an outcome into a record; `verify` re-checks a counterexample by
/// direct membership.
template <boolean_algebra A, class Verify>
void fill_record(run_record& rec, const outcome<A>& o, const A& alg, const char* yes, const char* no, Verify&& verify)
{
	rec.explored = o.explored;
	rec.pairs_explored = o.pairs_explored;
	rec.sat_queries = o.sat_queries;
	rec.representatives = o.representatives;
	if (o.unsupported) {
		rec.verdict = "unsupported";
		rec.error = *o.unsupported;
		return;
	}
	if (o.timed_out) {
		rec.verdict = "timeout";
		rec.timeout = true;
		return;
	}
	rec.verdict = o.holds ? yes : no;
	if (o.counterexample) {
		rec.counterexample = render_word(alg, *o.counterexample);
		rec.counterexample_codes = std::vector<std::uint64_t>(o.counterexample->begin(), o.counterexample->end());
		rec.counterexample_verified = verify(*o.counterexample);
	}
}

/// Runs `body`, timing it and turning exceptions into error records.
template <class Body>
run_record guarded_run(run_record rec, Body&& body)
{
	const auto start = std::chrono::steady_clock::now();
	try {
		body(rec);
	} catch (const parse_error& e) {
		rec.verdict = "error";
		rec.error = std::string("parse error at line ") + std::to_string(e.line()) + ", column " +
		            std::to_string(e.column()) + ": " + e.what();
	} catch (const timeout_error&) {
		rec.verdict = "timeout";
		rec.timeout = true;
	} catch (const std::exception& e) {
		rec.verdict = "error";
		rec.error = e.what();
	}
	rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
	return rec;
}

inline run_record new_record(const std::string& command, const run_options& opts, std::vector<std::string> inputs)
{
	run_record r;
	r.command = command;
	r.engine = engine_name(opts.engine);
	r.inputs = std::move(inputs);
	r.timeout_ms = opts.timeout_ms;
	return r;
}

/// `equiv FILE LHS RHS` compares two configurations of one automaton;
/// `equiv FILE_A FILE_B` compares the initial configurations of two.
inline run_record cmd_equiv(const std::vector<std::string>& files, const std::optional<std::string>& lhs,
                            const std::optional<std::string>& rhs, const run_options& opts)
{
	std::vector<std::string> inputs = files;
	if (lhs) { inputs.push_back(*lhs); }
	if (rhs) { inputs.push_back(*rhs); }
	return guarded_run(new_record("equiv", opts, inputs), [&](run_record& rec) {
		load_context ctx;
		auto run = [&](const auto& m, pbf p, pbf q) {
			const auto o = decide_equiv(m, p, q, opts);
			fill_record(rec, o, m.algebra(), "equivalent", "inequivalent", [&](const auto& w) {
				return accepts_from(m, p, std::span(w)) != accepts_from(m, q, std::span(w));
			});
		};
		auto with_file = [&](const std::string& path) {
			try {
				return load_automaton(path, ctx);
			} catch (const parse_error& e) {
				throw parse_error(path + ": " + e.what(), e.line(), e.column());
			}
		};
		if (files.size() == 1) {
			if (!lhs || !rhs) { throw usage_error("equiv with one file needs two configurations"); }
			std::visit([&](const auto& m) { run(m, parse_config(m, *lhs), parse_config(m, *rhs)); }, with_file(files[0]));
		} else if (files.size() == 2) {
			if (lhs || rhs) { throw usage_error("equiv with two files compares their initial formulas"); }
			const auto a = with_file(files[0]);
			const auto b = with_file(files[1]);
			if (a.index() != b.index()) { throw usage_error("the two automata use different algebras"); }
			std::visit([&](const auto& m1) {
				const auto& m2 = std::get<std::decay_t<decltype(m1)>>(b);
				const auto j = join(m1, m2);
				run(j.result, j.lhs, j.rhs);
			}, a);
		} else {
			throw usage_error("equiv expects one or two automaton files");
		}
	});
}

inline run_record cmd_empty(const std::string& file, const run_options& opts)
{
	return guarded_run(new_record("empty", opts, {file}), [&](run_record& rec) {
		load_context ctx;
		const any_automaton a = [&] {
			try {
				return load_automaton(file, ctx);
			} catch (const parse_error& e) {
				throw parse_error(file + ": " + e.what(), e.line(), e.column());
			}
		}();
		std::visit([&](const auto& m) {
			const auto o = decide_equiv(m, m.initial(), pbf_store::ff, opts);
			fill_record(rec, o, m.algebra(), "empty", "nonempty",
			            [&](const auto& w) { return accepts(m, std::span(w)); });
		}, a);
	});
}

inline run_record cmd_ltlf_sat(const std::string& formula, const run_options& opts)
{
	return guarded_run(new_record("ltlf-sat", opts, {formula}), [&](run_record& rec) {
		const ltlf_formula phi = parse_ltlf(formula);
		const ltlf_automaton la = ltlf_to_afa(phi);
		const auto& m = la.afa;
		const pbf start = la.traces();
		outcome<bv_algebra> o;
		if (opts.engine == engine_kind::sfa_eq) {
			o.unsupported = "sfa-eq does not accept alternating automata";
		} else {
			o = decide_equiv(m, start, pbf_store::ff, opts);
		}
		fill_record(rec, o, m.algebra(), "unsat", "sat", [&](const std::vector<std::uint64_t>& w) {
			return accepts_from(m, start, std::span(w)) && ltlf_holds(phi, w);
		});
	});
}

/// Regexes plus an equation between intersections, e.g. `1&2 = 1&2&2'`.
/// A primed index denotes a fresh isomorphic copy of that regex.
struct regex_query
{
	struct term
	{
		std::size_t index;  ///< 0-based
		unsigned copy;      ///< number of primes

		auto operator<=>(const term&) const = default;
	};

	std::vector<std::string> patterns;
	std::vector<term> lhs;
	std::vector<term> rhs;
};

inline std::vector<regex_query::term> parse_intersection(std::string_view s, std::size_t patterns)
{
	std::vector<regex_query::term> out;
	std::size_t i = 0;
	auto skip = [&] {
		while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == '&' || s[i] == ',')) { ++i; }
		if (s.substr(i, 3) == "\xE2\x88\xA9") { // U+2229
			i += 3;
			return true;
		}
		return false;
	};
	while (true) {
		while (skip()) { }
		if (i >= s.size()) { break; }
		if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
			throw parse_error("expected a regex index in query", 1, i + 1);
		}
		std::size_t v = 0;
		while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { v = v * 10 + static_cast<std::size_t>(s[i++] - '0'); }
		unsigned copy = 0;
		while (i < s.size() && s[i] == '\'') {
			++copy;
			++i;
		}
		if (v == 0 || v > patterns) {
			throw parse_error("regex index " + std::to_string(v) + " out of range 1.." + std::to_string(patterns), 1, i);
		}
		out.push_back({v - 1, copy});
	}
	if (out.empty()) { throw parse_error("empty side in query", 1, 1); }
	return out;
}

inline void set_equation(regex_query& q, std::string_view eq)
{
	const auto at = eq.find('=');
	if (at == std::string_view::npos) { throw parse_error("query needs '='", 1, 1); }
	q.lhs = parse_intersection(eq.substr(0, at), q.patterns.size());
	q.rhs = parse_intersection(eq.substr(at + 1), q.patterns.size());
}

/// Patterns and the `query ...` equation, if any.
inline std::pair<std::vector<std::string>, std::optional<std::string>> split_query_file(const std::string& text)
{
	std::vector<std::string> patterns;
	std::optional<std::string> eq;
	std::istringstream in(text);
	std::string line;
	while (std::getline(in, line)) {
		if (!line.empty() && line.back() == '\r') { line.pop_back(); }
		const auto t = safa::detail::trim(line);
		if (t.empty() || t.front() == '#') { continue; }
		if (t.substr(0, 6) == "query ") {
			eq = std::string(t.substr(6));
		} else {
			patterns.emplace_back(t);
		}
	}
	return {std::move(patterns), std::move(eq)};
}

/// One pattern per line, `#` comment lines, and a `query ...` line.  An
/// explicit equation replaces the query line.
inline regex_query parse_regex_query(const std::string& text, const std::optional<std::string>& equation = {})
{
	auto [patterns, eq] = split_query_file(text);
	regex_query q;
	q.patterns = std::move(patterns);
	if (equation) { eq = equation; }
	if (!eq) { throw parse_error("no 'query' line and no equation given"); }
	set_equation(q, *eq);
	return q;
}

/// Regex patterns of a corpus file.
inline std::vector<std::string> read_corpus(const std::string& path)
{
	return split_query_file(read_file(path)).first;
}

/// The s-AFA holding every regex component of a query, with the two
/// intersection configurations.
struct regex_setup
{
	std::shared_ptr<interval_algebra> alg;
	std::vector<sfa<interval_algebra>> sfas;
	std::optional<automaton<interval_algebra>> joint;
	pbf lhs;
	pbf rhs;

	bool accepts_side(const std::vector<regex_query::term>& side, const std::vector<codepoint>& w) const
	{
		for (const auto& t : side) {
			if (!sfa_accepts(sfas[t.index], w)) { return false; }
		}
		return true;
	}
};

inline regex_setup build_regex_setup(const regex_query& q)
{
	regex_setup s;
	s.alg = std::make_shared<interval_algebra>();
	std::vector<char> used(q.patterns.size(), 0);
	for (const auto& t : q.lhs) { used[t.index] = 1; }
	for (const auto& t : q.rhs) { used[t.index] = 1; }
	for (std::size_t i = 0; i < q.patterns.size(); ++i) {
		try {
			if (used[i]) {
				s.sfas.push_back(regex_to_sfa(q.patterns[i], s.alg));
			} else {
				s.sfas.push_back(regex_to_sfa(std::string(), s.alg));
			}
		} catch (const parse_error& e) {
			throw parse_error("regex " + std::to_string(i + 1) + " '" + q.patterns[i] + "': " + e.what(), i + 1, e.column());
		}
	}

	std::vector<regex_query::term> comps(q.lhs);
	comps.insert(comps.end(), q.rhs.begin(), q.rhs.end());
	std::sort(comps.begin(), comps.end());
	comps.erase(std::unique(comps.begin(), comps.end()), comps.end());

	auto store = std::make_shared<pbf_store>();
	std::map<regex_query::term, pbf> init;
	std::vector<transition<interval_algebra>> trans;
	std::vector<char> fin;
	state_id offset = 0;
	for (const auto& c : comps) {
		const auto& a = s.sfas[c.index];
		for (const auto& e : a.edges()) { trans.push_back({e.source + offset, e.guard, store->state(e.target + offset)}); }
		for (state_id x = 0; x < a.state_count(); ++x) { fin.push_back(a.is_final(x) ? 1 : 0); }
		pbf p = pbf_store::ff;
		for (state_id x : a.initial()) { p = store->disj(p, store->state(x + offset)); }
		init.emplace(c, p);
		offset += static_cast<state_id>(a.state_count());
	}
	bitset f(offset);
	for (std::size_t i = 0; i < fin.size(); ++i) { f.set(i, fin[i] != 0); }
	auto side = [&](const std::vector<regex_query::term>& terms) {
		pbf p = pbf_store::tt;
		for (const auto& t : terms) { p = store->conj(p, init.at(t)); }
		return p;
	};
	s.lhs = side(q.lhs);
	s.rhs = side(q.rhs);
	s.joint.emplace(s.alg, store, offset, s.lhs, std::move(f), std::move(trans));
	return s;
}

inline outcome<interval_algebra> decide_regex(const regex_query& q, const regex_setup& s, const run_options& opts)
{
	if (opts.engine != engine_kind::sfa_eq) { return decide_equiv(*s.joint, s.lhs, s.rhs, opts); }
	outcome<interval_algebra> o;
	const deadline limit = engine_deadline(opts.timeout_ms);
	try {
		auto product = [&](const std::vector<regex_query::term>& side) {
			sfa<interval_algebra> acc = s.sfas[side[0].index];
			for (std::size_t i = 1; i < side.size(); ++i) { acc = sfa_intersect(acc, s.sfas[side[i].index], limit); }
			return acc;
		};
		const auto a = product(q.lhs);
		const auto b = product(q.rhs);
		const auto r = sfa_equiv(a, b, limit);
		o.holds = r.equivalent;
		o.timed_out = r.timed_out;
		o.counterexample = r.counterexample;
		o.explored = r.states_explored;
	} catch (const timeout_error&) {
		o.timed_out = true;
	}
	return o;
}

inline void regex_body(run_record& rec, const regex_query& q, const run_options& opts)
{
	if (q.lhs.empty()) { throw usage_error("regex query has no 'query' equation"); }
	const regex_setup s = build_regex_setup(q);
	const auto o = decide_regex(q, s, opts);
	fill_record(rec, o, *s.alg, "equivalent", "inequivalent", [&](const std::vector<codepoint>& w) {
		return s.accepts_side(q.lhs, w) != s.accepts_side(q.rhs, w);
	});
}

inline run_record run_regex_query(const regex_query& q, const run_options& opts, std::vector<std::string> inputs)
{
	return guarded_run(new_record("regex", opts, std::move(inputs)),
	                   [&](run_record& rec) { regex_body(rec, q, opts); });
}

inline run_record cmd_regex(const std::string& file, const std::optional<std::string>& equation, const run_options& opts)
{
	std::vector<std::string> inputs{file};
	if (equation) { inputs.push_back(*equation); }
	return guarded_run(new_record("regex", opts, inputs), [&](run_record& rec) {
		regex_body(rec, parse_regex_query(read_file(file), equation), opts);
	});
}

/// Bench manifest:
///   {"engines": [...], "timeout_ms": N, "seed": N, "cases": [
///     {"id": ..., "type": "equiv", "files": [...], "lhs": ..., "rhs": ...},
///     {"type": "empty", "file": ...},
///     {"type": "ltlf-sat", "formula": ...}          or "file": one formula per line
///     {"type": "regex", "file": ...},
///     {"type": "regex-forced-all", "corpus": ..., "limit": N},
///     {"type": "ltlf-random", "count": N, "size": N, "atoms": N}]}
/// Relative paths are resolved against the manifest's directory.
struct bench_settings
{
	std::vector<engine_kind> engines;          ///< overrides the manifest when nonempty
	std::optional<long long> timeout_ms;       ///< overrides the manifest
	std::optional<std::uint64_t> seed;         ///< overrides the manifest
	unsigned jobs = 1;
};

struct bench_case
{
	std::string id;
	long long timeout_ms;
	std::function<run_record(const run_options&)> run;
};

inline std::vector<bench_case> expand_manifest(const json& manifest, const std::filesystem::path& base,
                                               long long default_ms, std::optional<long long> forced_ms,
                                               std::uint64_t seed)
{
	std::vector<bench_case> out;
	auto resolve = [&](const std::string& p) {
		const std::filesystem::path path(p);
		return (path.is_absolute() ? path : base / path).string();
	};
	const json cases = manifest.value("cases", json::array());
	for (std::size_t k = 0; k < cases.size(); ++k) {
		const json& c = cases[k];
		const std::string type = c.value("type", "");
		const std::string id = c.value("id", type + "-" + std::to_string(k));
		auto budget = [&](long long fallback) {
			if (forced_ms) { return *forced_ms; }
			return c.value("timeout_ms", fallback);
		};
		if (type == "equiv") {
			std::vector<std::string> files;
			for (const auto& f : c.at("files")) { files.push_back(resolve(f.get<std::string>())); }
			std::optional<std::string> lhs, rhs;
			if (c.contains("lhs")) { lhs = c.at("lhs").get<std::string>(); }
			if (c.contains("rhs")) { rhs = c.at("rhs").get<std::string>(); }
			out.push_back({id, budget(default_ms), [=](const run_options& o) { return cmd_equiv(files, lhs, rhs, o); }});
		} else if (type == "empty") {
			const std::string file = resolve(c.at("file").get<std::string>());
			out.push_back({id, budget(default_ms), [=](const run_options& o) { return cmd_empty(file, o); }});
		} else if (type == "ltlf-sat") {
			std::vector<std::string> formulas;
			if (c.contains("formula")) {
				formulas.push_back(c.at("formula").get<std::string>());
			} else {
				std::istringstream in(read_file(resolve(c.at("file").get<std::string>())));
				std::string line;
				while (std::getline(in, line)) {
					const auto t = detail::trim(line);
					if (!t.empty() && t.front() != '#') { formulas.emplace_back(t); }
				}
			}
			for (std::size_t i = 0; i < formulas.size(); ++i) {
				const std::string f = formulas[i];
				out.push_back({formulas.size() == 1 ? id : id + "/" + std::to_string(i + 1), budget(random_batch_timeout_ms),
				               [=](const run_options& o) { return cmd_ltlf_sat(f, o); }});
			}
		} else if (type == "regex") {
			const std::string file = resolve(c.at("file").get<std::string>());
			out.push_back({id, budget(default_ms), [=](const run_options& o) { return cmd_regex(file, std::nullopt, o); }});
		} else if (type == "regex-forced-all") {
			const std::string corpus = resolve(c.at("corpus").get<std::string>());
			auto patterns = read_corpus(corpus);
			const std::size_t limit = c.value("limit", patterns.size());
			patterns.resize(std::min(limit, patterns.size()));
			for (std::size_t i = 0; i < patterns.size(); ++i) {
				for (std::size_t j = i + 1; j < patterns.size(); ++j) {
					regex_query q;
					q.patterns = {patterns[i], patterns[j]};
					q.lhs = {{0, 0}, {1, 0}};
					q.rhs = {{0, 0}, {1, 0}, {1, 1}};
					const std::string cid = id + "/" + std::to_string(i + 1) + "-" + std::to_string(j + 1);
					const std::vector<std::string> inputs{corpus, std::to_string(i + 1) + "&" + std::to_string(j + 1) + " = " +
					                                                  std::to_string(i + 1) + "&" + std::to_string(j + 1) + "&" +
					                                                  std::to_string(j + 1) + "'"};
					out.push_back({cid, budget(default_ms), [=](const run_options& o) { return run_regex_query(q, o, inputs); }});
				}
			}
		} else if (type == "ltlf-random") {
			const std::size_t count = c.value("count", std::size_t{100});
			const std::size_t size = c.value("size", std::size_t{8});
			const unsigned atoms = c.value("atoms", 3U);
			std::mt19937_64 rng(c.value("seed", seed));
			for (std::size_t i = 0; i < count; ++i) {
				const std::size_t s = std::uniform_int_distribution<std::size_t>(1, size)(rng);
				const std::string f = random_ltlf(rng, s, atoms).to_string();
				out.push_back({id + "/" + std::to_string(i + 1), budget(random_batch_timeout_ms),
				               [=](const run_options& o) { return cmd_ltlf_sat(f, o); }});
			}
		} else {
			throw usage_error("manifest case " + std::to_string(k) + ": unknown type '" + type + "'");
		}
	}
	return out;
}

struct bench_report
{
	std::vector<run_record> records;
	json summary;
	json scatter;

	json to_json() const
	{
		json recs = json::array();
		for (const auto& r : records) { recs.push_back(r.to_json()); }
		return {{"records", recs}, {"summary", summary}, {"scatter", scatter}};
	}
};

inline bench_report summarize(std::vector<run_record> records, const std::vector<engine_kind>& engines)
{
	bench_report rep;
	rep.summary = json::object();
	for (engine_kind e : engines) {
		const std::string name = engine_name(e);
		json s = {{"cases", 0}, {"timeouts", 0}, {"errors", 0}, {"unsupported", 0}, {"explored_total", 0},
		          {"wall_ms_total", 0.0}, {"invalid_counterexamples", 0}, {"verdicts", json::object()}};
		for (const auto& r : records) {
			if (r.engine != name) { continue; }
			s["cases"] = s["cases"].get<long>() + 1;
			if (r.timeout) { s["timeouts"] = s["timeouts"].get<long>() + 1; }
			if (r.verdict == "error") { s["errors"] = s["errors"].get<long>() + 1; }
			if (r.verdict == "unsupported") { s["unsupported"] = s["unsupported"].get<long>() + 1; }
			if (r.counterexample_verified && !*r.counterexample_verified) {
				s["invalid_counterexamples"] = s["invalid_counterexamples"].get<long>() + 1;
			}
			s["explored_total"] = s["explored_total"].get<std::size_t>() + r.explored;
			s["wall_ms_total"] = s["wall_ms_total"].get<double>() + r.wall_ms;
			s["verdicts"][r.verdict] = s["verdicts"].value(r.verdict, 0) + 1;
		}
		rep.summary[name] = s;
	}
	// one point per case: explored states and time under every engine
	std::map<std::string, json> points;
	std::vector<std::string> order;
	for (const auto& r : records) {
		auto [it, inserted] = points.emplace(r.case_id, json{{"case", r.case_id}, {"explored", json::object()},
		                                                     {"wall_ms", json::object()}, {"verdict", json::object()}});
		if (inserted) { order.push_back(r.case_id); }
		it->second["explored"][r.engine] = r.explored;
		it->second["wall_ms"][r.engine] = r.wall_ms;
		it->second["verdict"][r.engine] = r.verdict;
	}
	rep.scatter = json::array();
	for (const auto& id : order) { rep.scatter.push_back(points.at(id)); }
	rep.records = std::move(records);
	return rep;
}

inline bench_report cmd_bench(const std::string& manifest_path, const bench_settings& settings)
{
	const json manifest = json::parse(read_file(manifest_path));
	std::vector<engine_kind> engines = settings.engines;
	if (engines.empty()) {
		for (const auto& e : manifest.value("engines", json::array({"bisim"}))) { engines.push_back(parse_engine(e.get<std::string>())); }
	}
	const long long default_ms = manifest.value("timeout_ms", default_timeout_ms);
	const std::uint64_t seed = settings.seed.value_or(manifest.value("seed", std::uint64_t{1}));
	const auto cases = expand_manifest(manifest, std::filesystem::path(manifest_path).parent_path(), default_ms,
	                                   settings.timeout_ms, seed);

	struct job
	{
		const bench_case* c;
		engine_kind e;
	};
	std::vector<job> jobs;
	for (const auto& c : cases) {
		for (engine_kind e : engines) { jobs.push_back({&c, e}); }
	}
	std::vector<run_record> records(jobs.size());
	std::atomic<std::size_t> next{0};
	auto worker = [&] {
		for (std::size_t i = next++; i < jobs.size(); i = next++) {
			run_options o;
			o.engine = jobs[i].e;
			o.timeout_ms = jobs[i].c->timeout_ms;
			records[i] = jobs[i].c->run(o);
			records[i].case_id = jobs[i].c->id;
		}
	};
	const unsigned n = std::max(1U, settings.jobs);
	std::vector<std::thread> pool;
	for (unsigned t = 1; t < n; ++t) { pool.emplace_back(worker); }
	worker();
	for (auto& t : pool) { t.join(); }
	return summarize(std::move(records), engines);
}

} // namespace safa::cli

#endif // SAFA_TOOLS_DRIVER_HH_
