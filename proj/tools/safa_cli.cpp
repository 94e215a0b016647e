// safa -- command-line front end for the s-AFA decision procedures.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "driver.hh"

using namespace safa;
using namespace safa::cli;

namespace
{

int emit(const std::vector<run_record>& records, bool as_json)
{
	bool failed = false;
	bool timed_out = false;
	if (as_json) {
		json out = json::array();
		for (const auto& r : records) { out.push_back(r.to_json()); }
		std::cout << (records.size() == 1 ? out[0] : out).dump(2) << '\n';
	}
	for (const auto& r : records) {
		if (!as_json) { std::cout << r.to_text() << '\n'; }
		failed = failed || r.verdict == "error";
		timed_out = timed_out || r.timeout;
	}
	return failed ? 1 : (timed_out ? 2 : 0);
}

std::vector<engine_kind> engine_list(const std::string& text)
{
	std::vector<engine_kind> out;
	std::size_t b = 0;
	while (b <= text.size()) {
		auto e = text.find(',', b);
		if (e == std::string::npos) { e = text.size(); }
		if (e > b) { out.push_back(parse_engine(text.substr(b, e - b))); }
		b = e + 1;
	}
	return out;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Equivalence and emptiness of symbolic alternating finite automata"};
	app.require_subcommand(1);

	std::string engine = "bisim";
	long long timeout_ms = default_timeout_ms;
	bool as_json = false;
	std::uint64_t seed = 1;
	bool no_prune = false;

	auto common = [&](CLI::App* sub) {
		sub->add_option("--engine", engine, "bisim, reverse-sfa or sfa-eq")->capture_default_str();
		sub->add_option("--timeout-ms", timeout_ms, "time budget per query")->capture_default_str();
		sub->add_flag("--json", as_json, "machine-readable output");
		sub->add_option("--seed", seed, "random seed")->capture_default_str();
	};

	std::vector<std::string> equiv_args;
	auto* equiv = app.add_subcommand("equiv", "FILE LHS RHS, or FILE_A FILE_B");
	equiv->add_option("args", equiv_args, "automaton file(s) and configurations")->required()->expected(2, 3);
	equiv->add_flag("--no-prune", no_prune, "skip pruning before bisimulation");
	common(equiv);

	std::string empty_file;
	auto* empty = app.add_subcommand("empty", "language emptiness of an automaton file");
	empty->add_option("file", empty_file)->required();
	empty->add_flag("--no-prune", no_prune, "skip pruning before bisimulation");
	common(empty);

	std::string ltlf_file;
	std::string ltlf_formula;
	auto* ltlf = app.add_subcommand("ltlf-sat", "satisfiability of LTL-f formulas (one per line)");
	ltlf->add_option("file", ltlf_file, "formula file");
	ltlf->add_option("--formula", ltlf_formula, "formula text instead of a file");
	common(ltlf);
	ltlf->callback([&] {
		if (ltlf_file.empty() == ltlf_formula.empty()) { throw CLI::ValidationError("give a formula file or --formula"); }
	});

	std::string regex_file;
	std::string regex_eq;
	auto* regex = app.add_subcommand("regex", "equation between intersections of regexes");
	regex->add_option("file", regex_file, "patterns, one per line, and a 'query' line")->required();
	regex->add_option("--query", regex_eq, "equation such as \"1&2 = 1&2&2'\"");
	common(regex);

	std::string manifest;
	std::string engines;
	unsigned jobs = 1;
	std::string csv_path;
	std::string out_path;
	auto* bench = app.add_subcommand("bench", "run a benchmark manifest");
	bench->add_option("manifest", manifest)->required();
	bench->add_option("--engines", engines, "comma-separated engines (default: from manifest)");
	bench->add_option("--engine", engines, "alias of --engines");
	bench->add_option("--timeout-ms", timeout_ms, "time budget per case (default: from manifest)");
	bench->add_option("--seed", seed, "seed for random cases");
	bench->add_option("--jobs", jobs, "parallel workers")->capture_default_str();
	bench->add_option("--csv", csv_path, "also write records as CSV");
	bench->add_option("-o,--output", out_path, "write the JSON report here instead of stdout");
	bench->add_flag("--json", as_json, "accepted for symmetry; the report is always JSON");

	CLI11_PARSE(app, argc, argv);

	try {
		run_options opts;
		opts.timeout_ms = timeout_ms;
		opts.prune = !no_prune;
		if (!bench->parsed()) { opts.engine = parse_engine(engine); }

		if (equiv->parsed()) {
			std::vector<std::string> files{equiv_args[0]};
			std::optional<std::string> lhs, rhs;
			if (equiv_args.size() == 3) {
				lhs = equiv_args[1];
				rhs = equiv_args[2];
			} else {
				files.push_back(equiv_args[1]);
			}
			return emit({cmd_equiv(files, lhs, rhs, opts)}, as_json);
		}
		if (empty->parsed()) { return emit({cmd_empty(empty_file, opts)}, as_json); }
		if (ltlf->parsed()) {
			std::vector<run_record> out;
			if (!ltlf_formula.empty()) {
				out.push_back(cmd_ltlf_sat(ltlf_formula, opts));
			} else {
				std::istringstream in(read_file(ltlf_file));
				std::string line;
				while (std::getline(in, line)) {
					const auto t = detail::trim(line);
					if (!t.empty() && t.front() != '#') { out.push_back(cmd_ltlf_sat(std::string(t), opts)); }
				}
			}
			return emit(out, as_json);
		}
		if (regex->parsed()) {
			std::optional<std::string> eq;
			if (!regex_eq.empty()) { eq = regex_eq; }
			return emit({cmd_regex(regex_file, eq, opts)}, as_json);
		}
		if (bench->parsed()) {
			bench_settings s;
			s.engines = engine_list(engines);
			if (bench->count("--timeout-ms") != 0) { s.timeout_ms = timeout_ms; }
			if (bench->count("--seed") != 0) { s.seed = seed; }
			s.jobs = jobs;
			const auto rep = cmd_bench(manifest, s);
			const std::string text = rep.to_json().dump(2);
			if (out_path.empty()) {
				std::cout << text << '\n';
			} else {
				std::ofstream(out_path) << text << '\n';
			}
			if (!csv_path.empty()) { std::ofstream(csv_path) << to_csv(rep.records); }
			return 0;
		}
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	}
	return 0;
}
