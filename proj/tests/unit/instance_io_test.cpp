#include <doctest.h>

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "otsp/adversary.hpp"
#include "otsp/instance_io.hpp"
#include "otsp/metric.hpp"
#include "otsp/placement_array.hpp"
#include "support/builders.hpp"

using namespace otsp;
using namespace otsp::testing;

namespace {

void check_same_distances(const MetricSpace& a, const MetricSpace& b) {
    REQUIRE(a.size() == b.size());
    for (std::uint32_t i = 0; i < a.size(); ++i)
        for (std::uint32_t j = 0; j < a.size(); ++j)
            CHECK(a.distance(PointId{i}, PointId{j}) ==
                  b.distance(PointId{i}, PointId{j}));
}

void check_round_trip(const AdversaryStream& original) {
    const std::string text = instance_to_json(original);
    const AdversaryStream back = parse_instance_json(text);
    CHECK(back.order == original.order);
    CHECK(back.space->kind() == original.space->kind());
    check_same_distances(*back.space, *original.space);
    CHECK(back.meta.generator == original.meta.generator);
    CHECK(back.meta.params == original.meta.params);
    CHECK(back.meta.seed == original.meta.seed);
    CHECK(back.meta.far_served == original.meta.far_served);
    CHECK(back.meta.epochs == original.meta.epochs);
    CHECK(instance_to_json(back) == text);  // byte-stable round trip
}

}  // namespace

TEST_CASE("round trip: all four space kinds") {
    check_round_trip(random_stream_euclidean(3, 12, 21));
    check_round_trip(random_stream_uniform(4, 15, 22));
    check_round_trip(random_stream_matrix(5, 9, 23));
    check_round_trip(oblivious_random_adversary(40, 24));  // two-level space
    check_round_trip(comb_stream(10));
}

TEST_CASE("round trip preserves repeated stream entries") {
    AdversaryStream s = random_stream_uniform(3, 4, 7);
    s.order = {PointId{1}, PointId{1}, PointId{0}, PointId{2}, PointId{1}};
    check_round_trip(s);
}

TEST_CASE("missing stream defaults to the identity order") {
    const std::string text =
        R"({"kind":"euclidean","dim":1,"points":[[0],[1],[3]]})";
    const AdversaryStream s = parse_instance_json(text);
    REQUIRE(s.order.size() == 3);
    for (std::uint32_t i = 0; i < 3; ++i) CHECK(s.order[i] == PointId{i});
    CHECK(s.space->distance(PointId{0}, PointId{2}) == 3.0);
}

TEST_CASE("parse rejects malformed instances") {
    CHECK_THROWS_AS(parse_instance_json("{not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_instance_json(R"({"dim":1})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_instance_json(R"({"kind":"socks"})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        parse_instance_json(
            R"({"kind":"euclidean","dim":1,"points":[[0]],"stream":[1]})"),
        std::invalid_argument);
}

TEST_CASE("file round trip and missing-file error") {
    const std::string path = "io_test_instance.json";
    const AdversaryStream original = random_stream_euclidean(2, 8, 5);
    save_instance(original, path);
    const AdversaryStream loaded = load_instance(path);
    CHECK(loaded.order == original.order);
    check_same_distances(*loaded.space, *original.space);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_instance(path), std::runtime_error);
}

TEST_CASE("placement_json: ids for occupied cells, null for empty ones") {
    PlacementArray a(4);
    a.place(0, PointId{5});
    a.place(2, PointId{0});
    CHECK(placement_json(a) == "[5,null,0,null]");
    CHECK(placement_json(PlacementArray(0)) == "[]");
}
