#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "otsp/harness.hpp"
#include "otsp/instance_io.hpp"
#include "otsp/metric.hpp"
#include "otsp/rng.hpp"
#include "support/builders.hpp"

using namespace otsp;
using namespace otsp::testing;

TEST_CASE("make_stream dispatches on the generator name") {
    CHECK(make_stream("euclidean:3", 12, 1).space->dimension() == 3);
    CHECK(make_stream("euclidean", 12, 1).space->dimension() == 2);
    CHECK(make_stream("uniform:5", 12, 1).space->kind() == SpaceKind::uniform);
    CHECK(make_stream("matrix:6", 12, 1).space->matrix_order() == 6);
    CHECK(make_stream("comb:9", 30, 1).meta.params == "m=9");
    CHECK(make_stream("comb", 30, 1).meta.params == "m=5");
    CHECK(make_stream("adversary", 30, 1).meta.generator == "adversary");
    CHECK(make_stream("multiscale:2", 30, 1).space->dimension() == 2);
    CHECK(make_stream("uniform:5", 12, 1).order.size() == 12);
    CHECK_THROWS_AS(make_stream("socks", 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_stream("euclidean:0:0", 4, 1), std::invalid_argument);
}

TEST_CASE("make_stream file source enforces the stored length") {
    const std::string path = "harness_test_instance.json";
    save_instance(random_stream_euclidean(1, 6, 2), path);
    CHECK(make_stream("file:" + path, 0, 0).order.size() == 6);
    CHECK(make_stream("file:" + path, 6, 0).order.size() == 6);
    CHECK_THROWS_AS(make_stream("file:" + path, 7, 0), std::invalid_argument);
    std::remove(path.c_str());
    CHECK_THROWS_AS(make_stream("file:" + path, 0, 0), std::runtime_error);
}

TEST_CASE("run_single: the empty run is a well-formed record") {
    RunConfig cfg;
    cfg.n = 0;
    const RunRecord rec = run_single(cfg);
    CHECK(rec.ok());
    CHECK(rec.placed == 0);
    CHECK(rec.cost == 0.0);
    CHECK_FALSE(rec.has_bounds);
    CHECK_FALSE(rec.ratio_lower.has_value());
    CHECK_FALSE(rec.ratio_upper.has_value());
    CHECK(rec.resets.empty());
}

TEST_CASE("run_single: full placer on a small line stays within its factor") {
    RunConfig cfg;
    cfg.algorithm = "rfmb";
    cfg.generator = "euclidean:1";
    cfg.n = 16;
    cfg.seed = 3;
    cfg.want_exact = true;
    const RunRecord rec = run_single(cfg);
    REQUIRE(rec.ok());
    CHECK(rec.placed == 16);
    REQUIRE(rec.has_bounds);
    REQUIRE(rec.bounds.exact.has_value());
    REQUIRE(rec.ratio_upper.has_value());
    REQUIRE(rec.ratio_lower.has_value());
    CHECK(*rec.ratio_lower == *rec.ratio_upper);  // exact denominator
    CHECK(*rec.ratio_upper <= 52.0 * 4.0);
    CHECK(rec.gap_trace.size() == 16);
    CHECK(rec.gaps_final == 0);
    CHECK(rec.gaps_max == *std::max_element(rec.gap_trace.begin(),
                                            rec.gap_trace.end()));
}

TEST_CASE("run_single: leftmost on a sorted stream is optimal") {
    const std::string path = "harness_sorted_line.json";
    {
        MetricSpaceSpec spec;
        spec.kind = SpaceKind::euclidean;
        spec.dim = 1;
        for (int i = 0; i < 12; ++i) spec.coords.push_back({0.3 * i * i});
        AdversaryStream s;
        s.space = std::make_shared<MetricSpace>(MetricSpace::build(std::move(spec)));
        s.order = ids(12);
        save_instance(s, path);
    }
    RunConfig cfg;
    cfg.algorithm = "leftmost";
    cfg.generator = "file:" + path;
    cfg.n = 12;
    cfg.want_exact = true;
    const RunRecord rec = run_single(cfg);
    std::remove(path.c_str());
    REQUIRE(rec.ok());
    REQUIRE(rec.ratio_upper.has_value());
    CHECK(*rec.ratio_upper == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("run_single: want_exact past the oracle cap fails loudly") {
    RunConfig cfg;
    cfg.generator = "euclidean:2";
    cfg.n = 40;
    cfg.want_exact = true;
    CHECK_THROWS_AS(run_single(cfg), std::length_error);
    cfg.want_exact = false;
    const RunRecord rec = run_single(cfg);  // bounds fall back to mst brackets
    CHECK(rec.ok());
    REQUIRE(rec.has_bounds);
    CHECK_FALSE(rec.bounds.exact.has_value());
    REQUIRE(rec.ratio_lower.has_value());
    REQUIRE(rec.ratio_upper.has_value());
    CHECK(*rec.ratio_lower <= *rec.ratio_upper);
}

TEST_CASE("run_single: all-duplicate streams leave the ratios undefined") {
    RunConfig cfg;
    cfg.generator = "uniform:1";
    cfg.n = 8;
    cfg.want_exact = true;
    const RunRecord rec = run_single(cfg);
    REQUIRE(rec.ok());
    CHECK(rec.cost == 0.0);
    CHECK_FALSE(rec.ratio_lower.has_value());
    CHECK_FALSE(rec.ratio_upper.has_value());
}

TEST_CASE("sweep isolates per-row failures") {
    std::vector<RunConfig> cfgs(3);
    cfgs[0].generator = "uniform:4";
    cfgs[0].n = 10;
    cfgs[1].algorithm = "";  // invalid: unknown placer
    cfgs[1].n = 10;
    cfgs[2].generator = "euclidean:1";
    cfgs[2].n = 6;
    const auto rows = sweep(cfgs);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].ok());
    CHECK_FALSE(rows[1].ok());
    CHECK_FALSE(rows[1].error.empty());
    CHECK(rows[1].n == 10);  // config echo survives the failure
    CHECK(rows[2].ok());
}

TEST_CASE("sweep expands trials with derived seeds, deterministically") {
    RunConfig cfg;
    cfg.generator = "euclidean:2";
    cfg.n = 24;
    cfg.seed = 5;
    cfg.trials = 3;
    cfg.gap_trace = false;
    const std::vector<RunConfig> cfgs = {cfg};
    const auto rows = sweep(cfgs);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].seed != rows[1].seed);
    CHECK(rows[1].seed != rows[2].seed);
    const auto again = sweep(cfgs);
    CHECK(records_jsonl(rows) == records_jsonl(again));
    const auto parallel = sweep(cfgs, 3);
    CHECK(records_jsonl(rows) == records_jsonl(parallel));
}

TEST_CASE("aggregate groups by (algorithm, generator, n) and averages") {
    std::vector<RunConfig> cfgs(2);
    cfgs[0].algorithm = "rfmb";
    cfgs[0].generator = "uniform:4";
    cfgs[0].n = 12;
    cfgs[0].trials = 3;
    cfgs[1] = cfgs[0];
    cfgs[1].algorithm = "leftmost";
    const auto rows = sweep(cfgs);
    REQUIRE(rows.size() == 6);
    const auto agg = aggregate(rows);
    REQUIRE(agg.size() == 2);
    CHECK(agg[0].algorithm == "rfmb");
    CHECK(agg[1].algorithm == "leftmost");
    for (const auto& a : agg) {
        CHECK(a.trials == 3);
        CHECK(a.errors == 0);
    }
    double mean = 0;
    for (std::size_t i = 0; i < 3; ++i) mean += rows[i].cost;
    mean /= 3;
    CHECK(agg[0].mean_cost == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("record_json carries the documented fields in a stable shape") {
    RunConfig cfg;
    cfg.generator = "uniform:3";
    cfg.n = 9;
    cfg.seed = 2;
    const RunRecord rec = run_single(cfg);
    const auto j = nlohmann::json::parse(record_json(rec));
    CHECK(j.at("algorithm") == "rfmb");
    CHECK(j.at("generator") == "uniform:3");
    CHECK(j.at("n") == 9);
    CHECK(j.at("seed") == 2);
    CHECK(j.at("placed") == 9);
    CHECK(j.contains("cost"));
    CHECK(j.at("bounds").contains("mst"));
    CHECK(j.at("gaps").contains("final"));
    CHECK(j.at("resets").contains("count"));
    CHECK_FALSE(j.contains("wall_ms"));  // timing was off
    CHECK(record_json(rec) == record_json(run_single(cfg)));

    RunConfig timed = cfg;
    timed.timing = true;
    CHECK(nlohmann::json::parse(record_json(run_single(timed))).contains("wall_ms"));
}

TEST_CASE("csv rows match the header column for column") {
    RunConfig cfg;
    cfg.generator = "euclidean:2";
    cfg.n = 10;
    const RunRecord rec = run_single(cfg);
    const std::string header = csv_header();
    CHECK(header ==
          "algorithm,generator,n,seed,cost,mst,opt_exact,ratio_lower,"
          "ratio_upper,gaps_max,resets,error");
    const std::string row = record_csv(rec);
    const auto commas = [](const std::string& s) {
        return std::count(s.begin(), s.end(), ',');
    };
    CHECK(commas(row) == commas(header));
}

TEST_CASE("verification suites run and pass at smoke budgets") {
    REQUIRE(suite_names().size() == 6);
    for (const auto& name : suite_names()) {
        const SuiteReport rep = run_suite(name, 8, 99);
        CHECK(rep.pass());
        CHECK(rep.checks > 0);
        CHECK(rep.suite == name);
    }
    CHECK_THROWS_AS(run_suite("socks", 10, 1), std::invalid_argument);
}

TEST_CASE("aggregate serializations are well-formed") {
    RunConfig cfg;
    cfg.generator = "uniform:4";
    cfg.n = 8;
    cfg.trials = 2;
    const std::vector<RunConfig> cfgs = {cfg};
    const auto rows = sweep(cfgs);
    const auto agg = aggregate(rows);
    const std::string csv = aggregate_csv(agg);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == std::ptrdiff_t(agg.size()) + 1);
    CHECK_FALSE(aggregate_table(agg).empty());
}
