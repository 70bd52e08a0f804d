#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "otsp/metric.hpp"

namespace otsp {

// Descriptor travelling with a generated stream: which generator made it,
// with which parameters and seed, and (for the adversary) whether the far
// point ended up in the stream and how many full universe copies were
// served before that.
struct StreamMeta {
    std::string generator;
    std::string params;
    std::uint64_t seed = 0;
    bool far_served = false;
    std::uint64_t epochs = 0;
};

// A metric space plus an arrival order over its point ids (repeats allowed).
struct AdversaryStream {
    std::shared_ptr<const MetricSpace> space;
    std::vector<PointId> order;
    StreamMeta meta;
};

// Universe size of the randomized adversary at stream length n: the
// smallest integer u with u^5 >= n^4 (exact integer arithmetic — no
// floating-point rounding), i.e. ceil(n^{4/5}). Also the far distance.
std::size_t adversary_universe_size(std::size_t n);

// The adversary's metric space for stream length n: ids 0..u-1 pairwise at
// distance 1, id u at distance u from all of them.
std::shared_ptr<const MetricSpace> adversary_space(std::size_t n);

// The randomized adversary: before each epoch, with probability n^{-3/5}
// fill every remaining slot with the far point and stop; otherwise serve
// one copy of the universe in id order (the final copy truncated so the
// stream has exactly n entries). Oblivious: the stream is a pure function
// of (n, seed). Pass a prebuilt adversary_space(n) to skip rebuilding the
// space across many seeds; n must be >= 1.
AdversaryStream oblivious_random_adversary(
    std::size_t n, std::uint64_t seed,
    std::shared_ptr<const MetricSpace> space = nullptr);

// Closed-form probability that the far point appears in the stream:
// 1 - (1 - n^{-3/5})^E with E = ceil(n/u) coin flips. At most n^{-2/5}
// (plus rounding) when n is a perfect 5th power.
double far_point_probability(std::size_t n);

// The hard configuration on the unit interval: endpoints a0 = 0, a1 = 1
// and X = {i/m : 0 <= i < m}, whose optimal walk has length ell = 1 while
// X is m points pairwise at least ell/m apart. Coordinates are rationals
// over a common denominator; the numerator fields carry them exactly so
// the defining inequalities can be checked in integer arithmetic.
struct CombInstance {
    std::shared_ptr<const MetricSpace> space;  // euclidean(1)
    std::vector<PointId> points;               // X, m ids
    PointId a0, a1;
    double ell = 1;

    // Exact rational coordinates: value(id) = numerator / denominator.
    // Empty numerators: validation falls back to floating point.
    std::uint64_t denominator = 1;
    std::vector<std::int64_t> numerators;  // parallel to points
    std::int64_t a0_numerator = 0;
    std::int64_t a1_numerator = 1;
};

// Builds the canonical instance for a given m >= 1: X at ids 0..m-1,
// a0 at id m, a1 at id m+1.
CombInstance comb_instance(std::size_t m);

// True iff both defining inequalities hold — pairwise X distances at least
// ell/m and d(a0,x) + d(x,a1) >= ell for every x in X — with ell
// recomputed from the space (exactly when the point count permits). Uses
// exact integer arithmetic when rational coordinates are present, exact
// floating-point comparisons (tolerance 0) otherwise.
bool validate_comb(const CombInstance& inst, const MetricSpace& space);

// Deterministic stream over comb_instance(max(1, floor(sqrt(n)))):
// a0, a1, then X cycled until n entries.
AdversaryStream comb_stream(std::size_t n);

// I.i.d. workloads (identity arrival order over a fresh point table):
// unit-cube coordinates / uniformly drawn labels "L0".."L{k-1}".
AdversaryStream random_stream_euclidean(std::size_t dim, std::size_t n,
                                        std::uint64_t seed);
AdversaryStream random_stream_uniform(std::size_t label_count, std::size_t n,
                                      std::uint64_t seed);

// Random valid distance matrix: symmetric, zero diagonal, entries in
// [scale, 2*scale] — triangle-safe by construction.
std::vector<std::vector<double>> random_valid_matrix(std::size_t order,
                                                     double scale,
                                                     std::uint64_t seed);

// Stream of n points over a random_valid_matrix space with `order` rows;
// points are drawn rows (duplicates likely when n > order).
AdversaryStream random_stream_matrix(std::size_t order, std::size_t n,
                                     std::uint64_t seed);

}  // namespace otsp
