#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "otsp/adversary.hpp"
#include "otsp/metric.hpp"
#include "otsp/tour_oracle.hpp"
#include "support/builders.hpp"

using namespace otsp;
using namespace otsp::testing;

TEST_CASE("universe size: smallest u with u^5 >= n^4") {
    CHECK(adversary_universe_size(1) == 1);
    CHECK(adversary_universe_size(2) == 2);       // 2^5 = 32 >= 16
    CHECK(adversary_universe_size(14) == 9);      // 9^5 = 59049 >= 38416
    CHECK(adversary_universe_size(32) == 16);     // 16^5 = 32^4 exactly
    CHECK(adversary_universe_size(64) == 28);     // 28^5 = 17210368 >= 64^4
    CHECK(adversary_universe_size(100000) == 10000);
    CHECK(adversary_universe_size(33554432) == 1048576);  // 2^25 -> 2^20
}

TEST_CASE("adversary space: u base points plus one far point at distance u") {
    const auto space = adversary_space(100);
    const std::size_t u = adversary_universe_size(100);  // 40
    CHECK(space->size() == u + 1);
    CHECK(space->distance(PointId{0}, PointId{1}) == 1.0);
    CHECK(space->distance(PointId{0}, PointId{std::uint32_t(u)}) == double(u));
}

TEST_CASE("adversary stream shape at n = 100000") {
    const AdversaryStream s = oblivious_random_adversary(100000, 4);
    CHECK(s.order.size() == 100000);
    CHECK(s.meta.epochs <= 10);  // at most ceil(n/u) = 10 universe copies
    CHECK(s.meta.generator == "adversary");
    CHECK(s.meta.seed == 4);
    for (PointId p : s.order) CHECK(p.value <= 10000);
}

TEST_CASE("adversary streams are a pure function of (n, seed)") {
    const AdversaryStream a = oblivious_random_adversary(3000, 11);
    const AdversaryStream b = oblivious_random_adversary(3000, 11);
    CHECK(a.order == b.order);
    CHECK(a.meta.far_served == b.meta.far_served);
    CHECK(a.meta.epochs == b.meta.epochs);
}

TEST_CASE("served-point optimum: base copies cost u-1, the far visit adds u") {
    // At n = 32 the universe has 16 points and the epoch coin lands heads
    // with probability 1/8, so a modest seed scan hits all three shapes:
    // no far point, far point after >= 1 full copy, and far-only.
    const std::size_t n = 32;
    const std::size_t u = adversary_universe_size(n);
    REQUIRE(u == 16);
    const auto space = adversary_space(n);
    const PointId far{std::uint32_t(u)};

    bool saw_absent = false, saw_served = false, saw_only_far = false;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        const AdversaryStream s = oblivious_random_adversary(n, seed, space);
        const bool has_far =
            std::find(s.order.begin(), s.order.end(), far) != s.order.end();
        CHECK(has_far == s.meta.far_served);
        const double opt = exact_opt(*space, s.order);
        if (!has_far) {
            CHECK(s.meta.epochs == 2);  // 32 = two full copies of 16
            CHECK(opt == double(u - 1));
            saw_absent = true;
        } else if (s.meta.epochs >= 1) {
            CHECK(opt == double(2 * u - 1));  // (u-1) within, u out to far
            saw_served = true;
        } else {
            CHECK(opt == 0.0);  // heads before any copy: far point only
            saw_only_far = true;
        }
        if (s.meta.far_served) {
            // Once the coin lands heads the rest of the stream is far.
            const auto first =
                std::find(s.order.begin(), s.order.end(), far);
            CHECK(std::all_of(first, s.order.end(),
                              [&](PointId p) { return p == far; }));
        }
    }
    CHECK(saw_absent);
    CHECK(saw_served);
    CHECK(saw_only_far);
}

TEST_CASE("far-point probability closed form") {
    CHECK(far_point_probability(1) == 1.0);
    const double p = std::pow(100000.0, -0.6);
    const double expected = 1.0 - std::pow(1.0 - p, 10.0);
    CHECK(far_point_probability(100000) ==
          doctest::Approx(expected).epsilon(1e-12));
    // Perfect fifth power: bounded by n^{-2/5}.
    CHECK(far_point_probability(100000) <= std::pow(100000.0, -0.4));
}

TEST_CASE("comb instance: spacing 1/m, endpoints 0 and 1") {
    const CombInstance inst = comb_instance(4);
    REQUIRE(inst.points.size() == 4);
    CHECK(inst.ell == 1.0);
    CHECK(inst.denominator == 4);
    CHECK(inst.a0_numerator == 0);
    CHECK(inst.a1_numerator == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(inst.numerators[i] == std::int64_t(i));
    for (std::size_t i = 0; i + 1 < 4; ++i)
        CHECK(inst.space->distance(inst.points[i], inst.points[i + 1]) ==
              doctest::Approx(0.25).epsilon(1e-12));
    CHECK(validate_comb(inst, *inst.space));
}

TEST_CASE("comb instance: m = 1 is trivially valid") {
    const CombInstance inst = comb_instance(1);
    CHECK(validate_comb(inst, *inst.space));
}

TEST_CASE("comb optimum is exactly ell") {
    const CombInstance inst = comb_instance(5);
    std::vector<PointId> all = inst.points;
    all.push_back(inst.a0);
    all.push_back(inst.a1);
    CHECK(exact_opt(*inst.space, all) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("comb validation rejects a coincident pair") {
    CombInstance inst = comb_instance(3);
    inst.numerators[1] = inst.numerators[0];  // two teeth collapse
    CHECK_FALSE(validate_comb(inst, *inst.space));
}

TEST_CASE("comb validation rejects teeth packed tighter than ell/m") {
    // Two points at 0.4 and 0.6 on [0, 1]: spacing 0.2 < ell/m = 0.5.
    MetricSpaceSpec spec;
    spec.kind = SpaceKind::euclidean;
    spec.dim = 1;
    spec.coords = {{0.4}, {0.6}, {0.0}, {1.0}};
    CombInstance inst;
    inst.space = std::make_shared<MetricSpace>(MetricSpace::build(std::move(spec)));
    inst.points = {PointId{0}, PointId{1}};
    inst.a0 = PointId{2};
    inst.a1 = PointId{3};
    inst.ell = 1.0;
    inst.denominator = 5;
    inst.numerators = {2, 3};
    inst.a0_numerator = 0;
    inst.a1_numerator = 5;
    CHECK_FALSE(validate_comb(inst, *inst.space));
}

TEST_CASE("comb validation rejects coincident endpoints with positive ell") {
    CombInstance inst = comb_instance(2);
    inst.a1_numerator = inst.a0_numerator;  // a0 = a1 while ell stays 1
    CHECK_FALSE(validate_comb(inst, *inst.space));
}

TEST_CASE("comb stream: a0, a1, then the teeth cycled") {
    const AdversaryStream s = comb_stream(14);
    REQUIRE(s.order.size() == 14);
    // m = floor(sqrt(14)) = 3: teeth are ids 0..2, a0 = 3, a1 = 4.
    CHECK(s.order[0] == PointId{3});
    CHECK(s.order[1] == PointId{4});
    for (std::size_t i = 2; i < 14; ++i)
        CHECK(s.order[i] == PointId{std::uint32_t((i - 2) % 3)});
    CHECK(s.meta.generator == "comb");
    CHECK(s.meta.params == "m=3");

    CHECK(comb_stream(1).order.size() == 1);
}

TEST_CASE("i.i.d. generators are reproducible and well-formed") {
    const AdversaryStream e1 = random_stream_euclidean(2, 50, 9);
    const AdversaryStream e2 = random_stream_euclidean(2, 50, 9);
    REQUIRE(e1.order.size() == 50);
    CHECK(e1.order == e2.order);
    CHECK(e1.space->kind() == SpaceKind::euclidean);
    CHECK(e1.space->dimension() == 2);
    for (std::uint32_t i = 0; i < 50; ++i) {
        CHECK(e1.order[i] == PointId{i});  // identity arrival order
        const auto a = e1.space->coords_of(PointId{i});
        const auto b = e2.space->coords_of(PointId{i});
        REQUIRE(a.size() == b.size());
        for (std::size_t d = 0; d < a.size(); ++d) {
            CHECK(a[d] == b[d]);
            CHECK(a[d] >= 0.0);
            CHECK(a[d] < 1.0);
        }
    }

    const AdversaryStream u1 = random_stream_uniform(1, 20, 3);
    CHECK(exact_opt(*u1.space, u1.order) == 0.0);  // one label: all duplicates

    const AdversaryStream m1 = random_stream_matrix(6, 25, 5);
    const AdversaryStream m2 = random_stream_matrix(6, 25, 5);
    CHECK(m1.space->matrix_order() == 6);
    CHECK(m1.order.size() == 25);
    for (std::uint32_t i = 0; i < 25; ++i)
        CHECK(m1.space->row_of(PointId{i}) == m2.space->row_of(PointId{i}));
}

TEST_CASE("random matrices are valid metrics with entries in [scale, 2*scale]") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto m = random_valid_matrix(8, 3.0, seed);
        REQUIRE(m.size() == 8);
        CHECK(validate_matrix_metric(m).ok());
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) {
                if (i == j) continue;
                CHECK(m[i][j] >= 3.0);
                CHECK(m[i][j] <= 6.0);
            }
    }
}
