#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "otsp/metric.hpp"
#include "otsp/rng.hpp"
#include "support/builders.hpp"

using namespace otsp;
using namespace otsp::testing;

TEST_CASE("uniform space: distinct labels pairwise at distance 1") {
    const MetricSpace s = uniform_space(3);
    CHECK(s.size() == 3);
    for (std::uint32_t i = 0; i < 3; ++i)
        for (std::uint32_t j = 0; j < 3; ++j)
            CHECK(s.distance(PointId{i}, PointId{j}) == (i == j ? 0.0 : 1.0));
}

TEST_CASE("uniform space: repeated labels are the same point") {
    const MetricSpace s = labelled_space({"a", "b", "a"});
    CHECK(s.distance(PointId{0}, PointId{2}) == 0.0);
    CHECK(s.distance(PointId{0}, PointId{1}) == 1.0);
    CHECK(s.canonical(PointId{2}) == PointId{0});
    CHECK(s.canonical(PointId{1}) == PointId{1});
}

TEST_CASE("euclidean line distances") {
    const MetricSpace s = line_space({0, 1, 3});
    CHECK(s.distance(PointId{0}, PointId{2}) == 3.0);
    CHECK(s.distance(PointId{0}, PointId{1}) == 1.0);
    CHECK(s.distance(PointId{1}, PointId{2}) == 2.0);
    CHECK(s.distance(PointId{1}, PointId{1}) == 0.0);
}

TEST_CASE("euclidean plane: 3-4-5 triangle") {
    const MetricSpace s = plane_space({{0, 0}, {3, 4}});
    CHECK(s.distance(PointId{0}, PointId{1}) == 5.0);
    CHECK(s.dimension() == 2);
}

TEST_CASE("matrix space looks up entries") {
    const MetricSpace s = matrix_space({{0, 2}, {2, 0}});
    CHECK(s.size() == 2);
    CHECK(s.matrix_order() == 2);
    CHECK(s.distance(PointId{0}, PointId{1}) == 2.0);
    CHECK(s.matrix_entry(0, 1) == 2.0);
}

TEST_CASE("matrix space: rows map several ids onto one row") {
    MetricSpaceSpec spec;
    spec.kind = SpaceKind::matrix;
    spec.matrix = {{0, 2}, {2, 0}};
    spec.rows = {0, 1, 0};
    const MetricSpace s = MetricSpace::build(std::move(spec));
    CHECK(s.size() == 3);
    CHECK(s.distance(PointId{0}, PointId{2}) == 0.0);
    CHECK(s.distance(PointId{1}, PointId{2}) == 2.0);
    CHECK(s.canonical(PointId{2}) == PointId{0});
    CHECK(s.row_of(PointId{2}) == 0);
}

TEST_CASE("two-level uniform space") {
    const MetricSpace s = two_level_space(5, 9);
    CHECK(s.size() == 6);
    CHECK(s.base_count() == 5);
    CHECK(s.far_distance() == 9.0);
    CHECK(s.distance(PointId{0}, PointId{1}) == 1.0);
    CHECK(s.distance(PointId{0}, PointId{5}) == 9.0);
    CHECK(s.distance(PointId{5}, PointId{5}) == 0.0);
}

TEST_CASE("validate_matrix_metric accepts a valid metric") {
    const ValidationReport report = validate_matrix_metric({{0, 1}, {1, 0}});
    CHECK(report.ok());
    CHECK(report.violations.empty());
}

TEST_CASE("validate_matrix_metric flags a triangle violation with witness") {
    const ValidationReport report =
        validate_matrix_metric({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
    CHECK_FALSE(report.ok());
    const bool found = std::any_of(
        report.violations.begin(), report.violations.end(), [](const MetricViolation& v) {
            return v.axiom == MetricViolation::Axiom::triangle && v.i == 0 && v.j == 2 &&
                   v.k == 1 && v.gap == doctest::Approx(1.0);
        });
    CHECK(found);
    CHECK_FALSE(report.violations.front().describe().empty());
}

TEST_CASE("validate_matrix_metric flags negative entries") {
    const ValidationReport report = validate_matrix_metric({{0, -1}, {-1, 0}});
    CHECK_FALSE(report.ok());
    const bool found = std::any_of(
        report.violations.begin(), report.violations.end(), [](const MetricViolation& v) {
            return v.axiom == MetricViolation::Axiom::non_negative;
        });
    CHECK(found);
}

TEST_CASE("validate_matrix_metric flags asymmetry and nonzero diagonal") {
    const ValidationReport asym = validate_matrix_metric({{0, 1}, {2, 0}});
    CHECK(std::any_of(asym.violations.begin(), asym.violations.end(),
                      [](const MetricViolation& v) {
                          return v.axiom == MetricViolation::Axiom::symmetric;
                      }));
    const ValidationReport diag = validate_matrix_metric({{1}});
    CHECK(std::any_of(diag.violations.begin(), diag.violations.end(),
                      [](const MetricViolation& v) {
                          return v.axiom == MetricViolation::Axiom::zero_diagonal;
                      }));
}

TEST_CASE("build rejects malformed specs") {
    MetricSpaceSpec ragged;
    ragged.kind = SpaceKind::euclidean;
    ragged.dim = 2;
    ragged.coords = {{0, 0}, {1}};
    CHECK_THROWS_AS(MetricSpace::build(std::move(ragged)), std::invalid_argument);

    MetricSpaceSpec nonsquare;
    nonsquare.kind = SpaceKind::matrix;
    nonsquare.matrix = {{0, 1}, {1, 0}, {2, 2}};
    CHECK_THROWS_AS(MetricSpace::build(std::move(nonsquare)), std::invalid_argument);

    MetricSpaceSpec invalid;
    invalid.kind = SpaceKind::matrix;
    invalid.matrix = {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}};
    invalid.validate = true;
    CHECK_THROWS_AS(MetricSpace::build(std::move(invalid)), std::invalid_argument);

    MetricSpaceSpec close_far;
    close_far.kind = SpaceKind::two_level_uniform;
    close_far.base_count = 3;
    close_far.far_distance = 0.4;  // would break the triangle inequality
    CHECK_THROWS_AS(MetricSpace::build(std::move(close_far)), std::invalid_argument);

    MetricSpaceSpec nonfinite;
    nonfinite.kind = SpaceKind::euclidean;
    nonfinite.dim = 1;
    nonfinite.coords = {{std::nan("")}};
    CHECK_THROWS_AS(MetricSpace::build(std::move(nonfinite)), std::invalid_argument);
}

TEST_CASE("distance throws on unknown ids") {
    const MetricSpace s = uniform_space(2);
    CHECK_THROWS_AS(s.distance(PointId{0}, PointId{2}), std::out_of_range);
    CHECK_THROWS_AS(s.canonical(PointId{7}), std::out_of_range);
}

TEST_CASE("memoization is semantics-free: bit-identical distances") {
    rng::Generator gen(17);
    std::vector<std::vector<double>> coords;
    for (int i = 0; i < 24; ++i) coords.push_back({gen.unit(), gen.unit(), gen.unit()});

    MetricSpaceSpec with;
    with.kind = SpaceKind::euclidean;
    with.dim = 3;
    with.coords = coords;
    with.memoize = true;
    MetricSpaceSpec without = with;
    without.memoize = false;

    const MetricSpace a = MetricSpace::build(std::move(with));
    const MetricSpace b = MetricSpace::build(std::move(without));
    CHECK(a.memoized());
    CHECK_FALSE(b.memoized());
    for (std::uint32_t i = 0; i < 24; ++i)
        for (std::uint32_t j = 0; j < 24; ++j)
            CHECK(a.distance(PointId{i}, PointId{j}) ==
                  b.distance(PointId{i}, PointId{j}));
}

TEST_CASE("comparison tolerance: relative slack for euclidean, exact otherwise") {
    const MetricSpace line = line_space({0, 2});
    CHECK(line.comparison_tolerance() > 0);
    CHECK(line.within(2.0 + 1e-10, 2.0));
    CHECK(line.within(2.0, 2.0));
    CHECK_FALSE(line.within(2.001, 2.0));

    const MetricSpace labels = uniform_space(2);
    CHECK(labels.comparison_tolerance() == 0.0);
    CHECK(labels.within(1.0, 1.0));
    CHECK_FALSE(labels.within(1.0 + 1e-12, 1.0));
}

TEST_CASE("random spaces satisfy the metric axioms") {
    rng::Generator gen(99);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<MetricSpace> spaces;
        {
            std::vector<std::vector<double>> coords;
            for (int i = 0; i < 12; ++i) coords.push_back({gen.unit(), gen.unit()});
            MetricSpaceSpec spec;
            spec.kind = SpaceKind::euclidean;
            spec.dim = 2;
            spec.coords = std::move(coords);
            spaces.push_back(MetricSpace::build(std::move(spec)));
        }
        {
            std::vector<std::string> labels;
            for (int i = 0; i < 12; ++i)
                labels.push_back("L" + std::to_string(gen.below(4)));
            spaces.push_back(labelled_space(std::move(labels)));
        }
        spaces.push_back(two_level_space(1 + gen.below(10), 0.5 + 10 * gen.unit()));

        for (const MetricSpace& s : spaces) {
            const std::uint32_t n = std::uint32_t(s.size());
            for (std::uint32_t i = 0; i < n; ++i) {
                CHECK(s.distance(PointId{i}, PointId{i}) == 0.0);
                for (std::uint32_t j = 0; j < n; ++j) {
                    const double dij = s.distance(PointId{i}, PointId{j});
                    CHECK(dij >= 0.0);
                    CHECK(dij == s.distance(PointId{j}, PointId{i}));
                    for (std::uint32_t k = 0; k < n; ++k) {
                        const double detour =
                            s.distance(PointId{i}, PointId{k}) +
                            s.distance(PointId{k}, PointId{j});
                        CHECK(dij <= detour + 1e-9 * (1.0 + detour));
                    }
                }
            }
        }
    }
}

TEST_CASE("concurrent memoized reads agree with unmemoized values") {
    rng::Generator gen(5);
    std::vector<std::vector<double>> coords;
    for (int i = 0; i < 32; ++i) coords.push_back({gen.unit(), gen.unit()});

    MetricSpaceSpec memo_spec;
    memo_spec.kind = SpaceKind::euclidean;
    memo_spec.dim = 2;
    memo_spec.coords = coords;
    MetricSpaceSpec plain_spec = memo_spec;
    plain_spec.memoize = false;
    const MetricSpace memo = MetricSpace::build(std::move(memo_spec));
    const MetricSpace plain = MetricSpace::build(std::move(plain_spec));

    std::vector<std::thread> threads;
    std::vector<int> mismatches(4, 0);
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&, t] {
            for (std::uint32_t i = 0; i < 32; ++i)
                for (std::uint32_t j = 0; j < 32; ++j)
                    if (memo.distance(PointId{i}, PointId{j}) !=
                        plain.distance(PointId{i}, PointId{j}))
                        ++mismatches[t];
        });
    }
    for (auto& th : threads) th.join();
    for (int t = 0; t < 4; ++t) CHECK(mismatches[t] == 0);
}
