#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "otsp/metric.hpp"

namespace otsp {

// An r-net over a growing point set: `centers` are pairwise more than r
// apart (packing), and every point fed so far lies within r of some center
// (covering). Centers are kept in insertion order; all lookups scan in that
// order so behaviour is deterministic.
struct Net {
    std::vector<PointId> centers;
    double radius = 0;
};

// Adds x as a center iff no existing center is within `radius` of it
// (distance comparisons use the space's tolerance regime). Returns whether
// x was inserted. Feeding the same point twice never inserts it twice.
bool increase_net(Net& net, PointId x, const MetricSpace& space);

// Index (into net.centers) of the first center, in insertion order, within
// net.radius of x; nullopt when none covers x.
std::optional<std::size_t> covering_center(const Net& net, PointId x,
                                           const MetricSpace& space);

// True iff covering holds for every point of X and packing holds for the
// centers. O(|X|*|C| + |C|^2).
bool verify_net(const Net& net, std::span<const PointId> X,
                const MetricSpace& space);

// 2*mst_weight(X) - (|C|-1)*radius. Nonnegative (up to tolerance) for every
// verified net: a net of k centers witnesses k-1 well-separated edges, so a
// large net forces a heavy spanning tree. Throws std::invalid_argument when
// the net does not verify against X.
double net_size_slack(const Net& net, std::span<const PointId> X,
                      const MetricSpace& space);

}  // namespace otsp
