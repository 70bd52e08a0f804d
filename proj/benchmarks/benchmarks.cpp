#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "otsp/adversary.hpp"
#include "otsp/metric.hpp"
#include "otsp/net.hpp"
#include "otsp/placers.hpp"
#include "otsp/tour_oracle.hpp"

using namespace otsp;

namespace {

void BM_DistanceEuclidean(benchmark::State& state) {
    const auto dim = std::size_t(state.range(0));
    const AdversaryStream s = random_stream_euclidean(dim, 1024, 1);
    std::uint32_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            s.space->distance(PointId{i & 1023}, PointId{(i * 7 + 3) & 1023}));
        ++i;
    }
}
BENCHMARK(BM_DistanceEuclidean)->Arg(1)->Arg(2)->Arg(3);

void BM_DistanceUniform(benchmark::State& state) {
    const AdversaryStream s = random_stream_uniform(32, 1024, 1);
    std::uint32_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            s.space->distance(PointId{i & 1023}, PointId{(i * 7 + 3) & 1023}));
        ++i;
    }
}
BENCHMARK(BM_DistanceUniform);

void BM_MstWeight(benchmark::State& state) {
    const auto n = std::size_t(state.range(0));
    const AdversaryStream s = random_stream_euclidean(2, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(mst_weight(*s.space, s.order));
    state.SetComplexityN(std::int64_t(n));
}
BENCHMARK(BM_MstWeight)->Range(64, 4096)->Complexity(benchmark::oNSquared);

void BM_ExactOpt(benchmark::State& state) {
    const auto n = std::size_t(state.range(0));
    const AdversaryStream s = random_stream_euclidean(2, n, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(exact_opt(*s.space, s.order, n));
}
BENCHMARK(BM_ExactOpt)->DenseRange(8, 16, 4);

void BM_IncreaseNet(benchmark::State& state) {
    const auto n = std::size_t(state.range(0));
    const AdversaryStream s = random_stream_euclidean(2, n, 4);
    for (auto _ : state) {
        Net net;
        net.radius = 0.05;
        for (PointId x : s.order) increase_net(net, x, *s.space);
        benchmark::DoNotOptimize(net.centers.size());
    }
}
BENCHMARK(BM_IncreaseNet)->Range(256, 4096);

void BM_PlacerEndToEnd(benchmark::State& state) {
    const auto n = std::size_t(state.range(0));
    const char* const names[] = {"rfmb", "leftmost"};
    const char* name = names[state.range(1)];
    const AdversaryStream s = random_stream_euclidean(2, n, 5);
    for (auto _ : state) {
        auto placer = make_placer(name, n, *s.space);
        for (PointId x : s.order) placer->next(x);
        benchmark::DoNotOptimize(placer->array().filled());
    }
    state.SetLabel(name);
}
BENCHMARK(BM_PlacerEndToEnd)
    ->ArgsProduct({{1024, 16384, 262144}, {0, 1}});

void BM_AdversaryGeneration(benchmark::State& state) {
    const auto n = std::size_t(state.range(0));
    const auto space = adversary_space(n);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            oblivious_random_adversary(n, ++seed, space).order.size());
    }
}
BENCHMARK(BM_AdversaryGeneration)->Arg(100000)->Arg(1000000);

}  // namespace

BENCHMARK_MAIN();
