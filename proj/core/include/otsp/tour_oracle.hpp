#pragma once

#include <optional>
#include <span>
#include <vector>

#include "otsp/metric.hpp"

namespace otsp {

// Offline reference quantities for a point multiset X in a metric space:
//
//   mst    — weight of a minimum spanning tree of the distinct points of X
//   lower  — proven lower bound on the shortest covering walk (equals mst)
//   upper  — proven upper bound (min of 2*mst and the doubling-walk length)
//   exact  — shortest covering-walk length when requested and small enough
//
// A covering walk visits every distinct point at least once; since revisits
// never help in a metric, the optimum is the shortest Hamiltonian path over
// the distinct points (0 for fewer than two of them).
struct TourBounds {
    double mst = 0;
    double lower = 0;
    double upper = 0;
    std::optional<double> exact;
};

inline constexpr std::size_t kDefaultExactCap = 18;

// Canonical representatives of X, deduplicated, ascending by id.
std::vector<PointId> distinct_points(const MetricSpace& space,
                                     std::span<const PointId> points);

// Minimum spanning tree weight over the distinct points of X. Deterministic:
// Prim from the smallest id, ties broken toward the lexicographically least
// edge {min id, max id}. O(k^2) time, O(k) memory. Singleton input weighs 0;
// empty input throws std::invalid_argument.
double mst_weight(const MetricSpace& space, std::span<const PointId> points);

// Tree edges of that MST in insertion order (k-1 edges), for inspection.
struct SpanningTree {
    std::vector<PointId> vertices;                     // distinct, ascending
    std::vector<std::pair<PointId, PointId>> edges;    // parent -> child
    double weight = 0;
};
SpanningTree minimum_spanning_tree(const MetricSpace& space,
                                   std::span<const PointId> points);

// Shortest covering-walk length via Held-Karp over the distinct points.
// Throws std::invalid_argument when X is empty and std::length_error when
// the distinct count exceeds `cap` (time/memory grow as 2^k * k^2).
double exact_opt(const MetricSpace& space, std::span<const PointId> points,
                 std::size_t cap = kDefaultExactCap);

// Preorder traversal of the MST (children visited in ascending id order).
// Covers every distinct point once; its length is at most twice the MST
// weight. Throws std::invalid_argument when X is empty.
struct Walk {
    std::vector<PointId> order;
    double length = 0;
};
Walk doubling_walk(const MetricSpace& space, std::span<const PointId> points);

// All of the above bundled: lower = mst, upper = min(2*mst, walk length),
// exact filled in when `want_exact` and the distinct count is within `cap`
// (silently omitted above the cap). Throws std::invalid_argument on empty X.
TourBounds opt_bounds(const MetricSpace& space, std::span<const PointId> points,
                      bool want_exact = false,
                      std::size_t cap = kDefaultExactCap);

}  // namespace otsp
