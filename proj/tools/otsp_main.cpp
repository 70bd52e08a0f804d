#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otsp/harness.hpp"
#include "otsp/instance_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitVerifyFailure = 2;

// Empty path or "-" means stdout.
void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<otsp::RunConfig> cross_product(
    const std::vector<std::string>& algorithms,
    const std::vector<std::string>& generators, const std::vector<std::size_t>& ns,
    std::uint64_t seed, std::size_t trials, bool exact, bool bounds,
    bool gap_trace, bool timing) {
    std::vector<otsp::RunConfig> configs;
    for (const auto& alg : algorithms)
        for (const auto& gen : generators)
            for (const std::size_t n : ns) {
                otsp::RunConfig c;
                c.algorithm = alg;
                c.generator = gen;
                c.n = n;
                c.seed = seed;
                c.trials = trials;
                c.want_exact = exact;
                c.compute_bounds = bounds;
                c.gap_trace = gap_trace;
                c.timing = timing;
                configs.push_back(std::move(c));
            }
    return configs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Online metric TSP workbench: competitive placers, offline tour "
        "oracles, and adversarial stream generators."};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen_cmd =
        app.add_subcommand("gen", "Generate an instance and emit its JSON");
    std::string gen_generator = "euclidean:2";
    std::size_t gen_n = 16;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen_cmd->add_option("-g,--generator", gen_generator,
                        "euclidean[:dim], uniform[:k], matrix[:order], comb[:m], "
                        "adversary, multiscale[:dim], file:PATH");
    gen_cmd->add_option("-n,--n", gen_n, "stream length");
    gen_cmd->add_option("-s,--seed", gen_seed, "random seed");
    gen_cmd->add_option("-o,--out", gen_out, "output path (default stdout)");

    // ---- run ----
    auto* run_cmd =
        app.add_subcommand("run", "Run one algorithm on one stream");
    std::string run_algorithm = "rfmb";
    std::string run_generator = "euclidean:2";
    std::size_t run_n = 16;
    std::uint64_t run_seed = 1;
    bool run_exact = false;
    bool run_csv = false;
    bool run_no_bounds = false;
    bool run_no_trace = false;
    bool run_timing = false;
    std::size_t run_exact_cap = otsp::kDefaultExactCap;
    std::string run_out;
    run_cmd->add_option("-a,--algorithm", run_algorithm,
                        "rfmb | fmb-half | leftmost");
    run_cmd->add_option("-g,--generator", run_generator, "stream generator");
    run_cmd->add_option("-n,--n", run_n, "stream length");
    run_cmd->add_option("-s,--seed", run_seed, "random seed");
    run_cmd->add_flag("--exact", run_exact,
                      "require the exact optimum (error above the oracle cap)");
    run_cmd->add_flag("--csv", run_csv, "emit CSV instead of a JSON line");
    run_cmd->add_flag("--no-bounds", run_no_bounds, "skip the offline oracles");
    run_cmd->add_flag("--no-gap-trace", run_no_trace,
                      "do not record the per-step gap counts");
    run_cmd->add_flag("--timing", run_timing, "include wall time in the output");
    run_cmd->add_option("--exact-cap", run_exact_cap,
                        "distinct-point cap for the exact oracle");
    run_cmd->add_option("-o,--out", run_out, "output path (default stdout)");

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Run a grid of (algorithm, generator, n) cells");
    std::vector<std::string> sweep_algorithms{"rfmb"};
    std::vector<std::string> sweep_generators{"euclidean:2"};
    std::vector<std::size_t> sweep_ns{16};
    std::uint64_t sweep_seed = 1;
    std::size_t sweep_trials = 1;
    bool sweep_exact = false;
    bool sweep_csv = false;
    bool sweep_no_bounds = false;
    bool sweep_trace = false;
    bool sweep_timing = false;
    bool sweep_summary = false;
    std::size_t sweep_jobs = 1;
    std::string sweep_out;
    sweep_cmd->add_option("-a,--algorithm", sweep_algorithms,
                          "algorithms (repeatable)");
    sweep_cmd->add_option("-g,--generator", sweep_generators,
                          "generators (repeatable)");
    sweep_cmd->add_option("-n,--n", sweep_ns, "stream lengths (repeatable)");
    sweep_cmd->add_option("-s,--seed", sweep_seed,
                          "master seed (per-trial seeds are derived)");
    sweep_cmd->add_option("-t,--trials", sweep_trials, "trials per cell");
    sweep_cmd->add_flag("--exact", sweep_exact, "require exact optima");
    sweep_cmd->add_flag("--csv", sweep_csv, "emit CSV instead of JSON lines");
    sweep_cmd->add_flag("--no-bounds", sweep_no_bounds,
                        "skip the offline oracles");
    sweep_cmd->add_flag("--gap-trace", sweep_trace,
                        "record per-step gap counts (off by default in sweeps)");
    sweep_cmd->add_flag("--timing", sweep_timing, "include wall times");
    sweep_cmd->add_flag("--summary", sweep_summary,
                        "print an aggregate table to stderr");
    sweep_cmd->add_option("-j,--jobs", sweep_jobs, "worker threads");
    sweep_cmd->add_option("-o,--out", sweep_out, "output path (default stdout)");

    // ---- verify ----
    auto* verify_cmd = app.add_subcommand(
        "verify", "Run randomized property suites against the guarantees");
    std::vector<std::string> verify_suites;
    std::size_t verify_budget = 200;
    std::uint64_t verify_seed = 1;
    verify_cmd->add_option("--suite", verify_suites,
                           "lemma3 | lemma4 | lemma6 | theorem8 | adversary | "
                           "comb (repeatable; default all)");
    verify_cmd->add_option("-b,--budget", verify_budget,
                           "work budget (trials / seeds / sizes per suite)");
    verify_cmd->add_option("-s,--seed", verify_seed, "master seed");

    // ---- plotdata ----
    auto* plot_cmd = app.add_subcommand(
        "plotdata", "Sweep a grid and emit per-cell aggregates as CSV");
    std::vector<std::string> plot_algorithms{"rfmb", "leftmost"};
    std::vector<std::string> plot_generators{"euclidean:2"};
    std::vector<std::size_t> plot_ns{64, 256, 1024, 4096};
    std::uint64_t plot_seed = 1;
    std::size_t plot_trials = 5;
    bool plot_exact = false;
    std::size_t plot_jobs = 1;
    std::string plot_out;
    plot_cmd->add_option("-a,--algorithm", plot_algorithms,
                         "algorithms (repeatable)");
    plot_cmd->add_option("-g,--generator", plot_generators,
                         "generators (repeatable)");
    plot_cmd->add_option("-n,--n", plot_ns, "stream lengths (repeatable)");
    plot_cmd->add_option("-s,--seed", plot_seed, "master seed");
    plot_cmd->add_option("-t,--trials", plot_trials, "trials per cell");
    plot_cmd->add_flag("--exact", plot_exact, "require exact optima");
    plot_cmd->add_option("-j,--jobs", plot_jobs, "worker threads");
    plot_cmd->add_option("-o,--out", plot_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (*gen_cmd) {
            const otsp::AdversaryStream stream =
                otsp::make_stream(gen_generator, gen_n, gen_seed);
            write_text(gen_out, otsp::instance_to_json(stream) + "\n");
            return kExitOk;
        }

        if (*run_cmd) {
            otsp::RunConfig config;
            config.algorithm = run_algorithm;
            config.generator = run_generator;
            config.n = run_n;
            config.seed = run_seed;
            config.want_exact = run_exact;
            config.compute_bounds = !run_no_bounds;
            config.gap_trace = !run_no_trace;
            config.timing = run_timing;
            config.exact_cap = run_exact_cap;
            const otsp::RunRecord record = otsp::run_single(config);
            std::string text;
            if (run_csv)
                text = otsp::csv_header() + "\n" + otsp::record_csv(record) + "\n";
            else
                text = otsp::record_json(record) + "\n";
            write_text(run_out, text);
            return kExitOk;
        }

        if (*sweep_cmd) {
            const auto configs = cross_product(
                sweep_algorithms, sweep_generators, sweep_ns, sweep_seed,
                sweep_trials, sweep_exact, !sweep_no_bounds, sweep_trace,
                sweep_timing);
            const auto records = otsp::sweep(configs, sweep_jobs);
            std::string text;
            if (sweep_csv) {
                text = otsp::csv_header() + "\n";
                for (const auto& rec : records) text += otsp::record_csv(rec) + "\n";
            } else {
                text = otsp::records_jsonl(records);
            }
            write_text(sweep_out, text);
            std::size_t errors = 0;
            for (const auto& rec : records) errors += rec.ok() ? 0 : 1;
            if (sweep_summary) {
                const auto rows = otsp::aggregate(records);
                std::cerr << otsp::aggregate_table(rows);
            }
            if (errors > 0)
                std::cerr << errors << " of " << records.size()
                          << " rows failed; see their error fields\n";
            return kExitOk;
        }

        if (*verify_cmd) {
            const std::vector<std::string>& suites =
                verify_suites.empty() ? otsp::suite_names() : verify_suites;
            bool all_pass = true;
            for (const auto& suite : suites) {
                const otsp::SuiteReport report =
                    otsp::run_suite(suite, verify_budget, verify_seed);
                std::cout << otsp::report_text(report);
                all_pass = all_pass && report.pass();
            }
            return all_pass ? kExitOk : kExitVerifyFailure;
        }

        if (*plot_cmd) {
            const auto configs =
                cross_product(plot_algorithms, plot_generators, plot_ns,
                              plot_seed, plot_trials, plot_exact,
                              /*bounds=*/true, /*gap_trace=*/false,
                              /*timing=*/false);
            const auto records = otsp::sweep(configs, plot_jobs);
            const auto rows = otsp::aggregate(records);
            write_text(plot_out, otsp::aggregate_csv(rows));
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitOk;
}
