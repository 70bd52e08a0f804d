#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "otsp/adversary.hpp"
#include "otsp/placers.hpp"
#include "otsp/tour_oracle.hpp"

namespace otsp {

// One experiment: run `algorithm` on a stream from `generator` (syntax
// "name" or "name:param", e.g. "euclidean:3", "uniform:8", "matrix:12",
// "comb:9", "multiscale:1", "adversary", "file:inst.json") with `n` points
// under `seed`.
struct RunConfig {
    std::string algorithm = "rfmb";
    std::string generator = "euclidean:2";
    std::size_t n = 0;
    std::uint64_t seed = 0;
    bool want_exact = false;       // fail loudly if exact OPT is unavailable
    std::size_t trials = 1;        // expanded by sweep via derived seeds
    bool compute_bounds = true;    // offline oracles on the consumed prefix
    bool gap_trace = true;         // record the gap count after every step
    bool timing = false;           // include wall time in serialized output
    std::size_t exact_cap = kDefaultExactCap;
};

struct RunRecord {
    // config echo
    std::string algorithm;
    std::string generator;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    bool want_exact = false;

    std::size_t placed = 0;
    double cost = 0;
    bool has_bounds = false;
    TourBounds bounds;
    // cost/upper and cost/lower bracket the instance's true ratio; both
    // collapse to cost/exact when the exact optimum was computed. Absent
    // when the denominator is 0 (all-duplicate streams) or bounds are off.
    std::optional<double> ratio_lower;
    std::optional<double> ratio_upper;

    std::vector<std::uint32_t> gap_trace;  // empty when tracing is off
    std::size_t gaps_final = 0;
    std::size_t gaps_max = 0;
    std::vector<ResetEvent> resets;
    StreamMeta stream_meta;
    bool timed = false;  // whether wall_ms should be serialized
    double wall_ms = 0;
    std::string error;  // nonempty = this row failed; other fields best-effort

    bool ok() const { return error.empty(); }
};

// Builds the stream named by `generator`. For "file:" sources a nonzero n
// must match the stored stream length; other generators produce exactly n
// points. Throws std::invalid_argument on unknown names/bad parameters.
AdversaryStream make_stream(const std::string& generator, std::size_t n,
                            std::uint64_t seed);

// Executes one run. Deterministic given (config, seed). Throws on config
// errors and on want_exact when the exact oracle cap is exceeded.
RunRecord run_single(const RunConfig& config);

// Expands each config into `trials` rows (per-trial seeds derived from the
// config seed), runs them all — `jobs` > 1 runs rows concurrently — and
// never throws: per-row errors land in RunRecord::error. Row order is the
// expansion order regardless of scheduling.
std::vector<RunRecord> sweep(std::span<const RunConfig> configs,
                             std::size_t jobs = 1);

// Per-(algorithm, generator, n) summary, rows in first-appearance order.
// Ratio means/maxes skip rows where the ratio is undefined.
struct AggregateRow {
    std::string algorithm;
    std::string generator;
    std::size_t n = 0;
    std::size_t trials = 0;
    std::size_t errors = 0;
    double mean_cost = 0;
    double mean_mst = 0;
    std::optional<double> mean_ratio_lower;
    std::optional<double> mean_ratio_upper;
    std::optional<double> max_ratio_upper;
};
std::vector<AggregateRow> aggregate(std::span<const RunRecord> records);

// Serialization. JSON lines have a fixed key order and shortest
// round-trip numbers: equal records give equal bytes. Wall time is only
// written when the record was produced with timing on.
std::string record_json(const RunRecord& record);
std::string records_jsonl(std::span<const RunRecord> records);
void write_jsonl(std::ostream& out, std::span<const RunRecord> records);
std::string csv_header();
std::string record_csv(const RunRecord& record);
void write_csv(std::ostream& out, std::span<const RunRecord> records);
std::string aggregate_csv(std::span<const AggregateRow> rows);
std::string aggregate_table(std::span<const AggregateRow> rows);

// ---- property / verification engines ----------------------------------

struct SuiteFailure {
    std::uint64_t seed = 0;
    std::string message;
    std::string witness;  // instance JSON when small enough, else summary
};

struct SuiteReport {
    std::string suite;
    std::size_t budget = 0;
    std::uint64_t seed = 0;
    std::size_t checks = 0;
    std::size_t failure_count = 0;
    std::vector<SuiteFailure> failures;  // first few only
    double seconds = 0;
    bool pass() const { return failure_count == 0; }
};

// Doubling-law bookkeeping across placer runs: consecutive resets at the
// same recursion level must at least double the recorded tree weight.
struct ResetStats {
    std::size_t events = 0;
    std::size_t pairs = 0;
    std::size_t violations = 0;
    double min_ratio = 0;  // smallest observed mst2/mst1 (0 until a pair)

    void absorb(std::span<const ResetEvent> events);
};

// mst <= exact <= 2*mst on random small instances across all space kinds.
SuiteReport check_sandwich(std::size_t trials, std::uint64_t seed);

// Net laws on random streams: packing+covering after every insertion,
// insertion idempotence, and 2*MST - (|C|-1)*r >= -1e-9*2*MST at the end.
SuiteReport check_net_laws(std::size_t trials, std::uint64_t seed);

// Half placer: for each n, `trials` random streams of ceil(n/2) points;
// gap count <= 2*sqrt(n); cost <= 11*sqrt(n)*exact when the exact optimum
// is computable, else <= 22*sqrt(n)*mst.
SuiteReport check_half_placer_bounds(std::span<const std::size_t> ns,
                                     std::size_t trials, std::uint64_t seed,
                                     ResetStats* stats = nullptr);

// Full placer: for each n, `trials` streams rotating over euclidean,
// uniform, comb-ordered, adversary, and multiscale families; array full;
// cost <= 52*sqrt(n)*exact — and the sharper 15*(2+sqrt(2))*sqrt(n)*exact —
// when exact is computable, else <= 104*sqrt(n)*mst.
SuiteReport check_full_placer_bounds(std::span<const std::size_t> ns,
                                     std::size_t trials, std::uint64_t seed,
                                     ResetStats* stats = nullptr);

// 3*n2 + 4*n/n1 <= 11*sqrt(n) for every 1 <= n <= max_n,
// with n1 = floor(sqrt(n)), n2 = 2*n1 (the block-count arithmetic the
// half placer's cost bound rests on).
SuiteReport check_block_constant(std::size_t max_n);

// Far-point frequency over `count` adversary streams at length n: within
// 3 binomial sigma of the closed form, and <= n^{-2/5} + 3 sigma.
SuiteReport check_adversary_statistics(std::size_t n, std::size_t count,
                                       std::uint64_t seed);

// comb_instance(m) validates exactly for m in 1..max_m; its optimal walk
// length equals 1 (checked via the exact oracle) for m <= exact_max_m.
SuiteReport check_comb_family(std::size_t max_m, std::size_t exact_max_m);

// (a) identical (config, seed) produce byte-identical JSONL; (b) for
// `pairs` random stream pairs sharing a length-i prefix, the first i
// placement indices of the full placer coincide.
SuiteReport check_determinism(std::size_t pairs, std::uint64_t seed);

// Named suite front end (CLI `verify`): lemma3 -> sandwich, lemma4 -> net
// laws, lemma6 -> half-placer bounds over square sizes 4..196 plus the
// block constant, theorem8 -> full-placer bounds over the same sizes,
// adversary -> far-point statistics at n = 1e5 with `budget` seeds,
// comb -> the comb family up to m = min(max(budget,16),64).
const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& suite, std::size_t budget,
                      std::uint64_t seed);

std::string report_text(const SuiteReport& report);

}  // namespace otsp
