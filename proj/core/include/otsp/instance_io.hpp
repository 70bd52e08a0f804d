#pragma once

#include <string>

#include "otsp/adversary.hpp"
#include "otsp/placement_array.hpp"

namespace otsp {

// JSON instance format:
//   {
//     "kind": "euclidean" | "uniform" | "matrix" | "two_level_uniform",
//     "dim": int,                     // euclidean
//     "points": [[c,...],...]         // euclidean: coordinates
//             | ["label",...]         // uniform: labels
//             | [row,...],            // matrix: row index per point
//     "matrix": [[d,...],...],        // matrix kind
//     "base_count": int,              // two_level_uniform
//     "far_distance": real,           // two_level_uniform
//     "stream": [id,...],             // arrival order; defaults to 0..n-1
//     "meta": {...}                   // generator descriptor, optional
//   }
// "stream" is a sequence of valid ids — repeats allowed, so generated
// streams that serve a point several times round-trip unchanged.

// Parse / serialize an instance. Serialization is deterministic (fixed key
// order, shortest round-trip numbers), so equal streams give equal bytes.
AdversaryStream parse_instance_json(const std::string& text);
std::string instance_to_json(const AdversaryStream& stream);

// File variants. Loading validates ids and shape and throws
// std::invalid_argument / std::runtime_error (missing file) on problems.
AdversaryStream load_instance(const std::string& path);
void save_instance(const AdversaryStream& stream, const std::string& path);

// The placement as a JSON array of point ids, null for empty cells.
std::string placement_json(const PlacementArray& array);

}  // namespace otsp
