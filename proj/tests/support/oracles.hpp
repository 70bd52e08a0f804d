#pragma once

#include <cstddef>
#include <span>

#include "otsp/metric.hpp"
#include "otsp/placement_array.hpp"

namespace otsp::testing {

// Shortest Hamiltonian-path length over the distinct points of X by full
// permutation enumeration. Independent of the production DP oracle.
// Throws std::invalid_argument on empty X, std::length_error above 8
// distinct points (8! = 40320 orders).
double brute_force_opt(const MetricSpace& space, std::span<const PointId> points);

// Minimum spanning tree weight by enumerating all k^(k-2) labelled trees
// via Pruefer sequences. Independent of the production Prim oracle.
// Throws std::invalid_argument on empty X, std::length_error above 8
// distinct points (8^6 = 262144 trees).
double brute_force_mst(const MetricSpace& space, std::span<const PointId> points);

// Reference recomputations by a full pass over the array.
double naive_cost(const PlacementArray& array, const MetricSpace& space);
std::size_t naive_gaps(const PlacementArray& array);

}  // namespace otsp::testing
