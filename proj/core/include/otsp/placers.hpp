#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "otsp/metric.hpp"
#include "otsp/net.hpp"
#include "otsp/placement_array.hpp"

namespace otsp {

// Logged whenever the block-filling net overflows and restarts. Successive
// resets at the same recursion level at least double the spanning-tree
// weight of the points received so far — the fact that keeps the total
// cost paid across resets a geometric sum.
struct ResetEvent {
    std::size_t level = 0;        // recursion depth (0 = outermost)
    std::size_t point_index = 0;  // placements done at this level before it
    double mst = 0;               // spanning-tree weight of points seen here
    double radius = 0;            // new net radius, 4*mst/n1
};

// State of the block-filling half placer on an n-cell window: a net over
// the received points and n2 = 2*floor(sqrt(n)) contiguous blocks, each
// assignable to at most one net center. Owns no cells — the caller places
// into the window at the returned indices.
struct FmbState {
    // Block partition: the first (n mod n2) blocks get the extra cell, so
    // every block has length >= floor(n/n2) and exactly n2 blocks exist.
    // Zero-length blocks (n < 4) are born full.
    struct Block {
        std::uint32_t begin = 0, end = 0;  // window cells [begin, end)
        std::uint32_t next_free = 0;       // leftmost empty cell
        std::int32_t center = -1;          // index into net.centers, -1 = none
        bool full() const { return next_free == end; }
    };

    FmbState(std::size_t n, const MetricSpace& space, std::size_t level = 0);

    std::size_t n = 0;
    std::size_t n1 = 0;     // floor(sqrt(n)), center budget
    std::size_t quota = 0;  // ceil(n/2), points this state accepts
    std::size_t level = 0;
    std::vector<Block> blocks;
    Net net;
    std::vector<std::int32_t> center_block;  // per center, block index or -1
    std::vector<PointId> received;           // distinct points seen (canonical)
    std::vector<std::uint8_t> seen;          // per space id, already received?
    std::size_t placements = 0;
    std::size_t block_scan_hint = 0;  // blocks below are full for good
    std::vector<ResetEvent> resets;
};

// One online step: updates the net (growing it or resetting it when it
// overflows), finds the covering center, keeps that center pointed at a
// non-full block, and returns the leftmost empty cell of that block as a
// window index. The caller must place x there before the next call.
// Throws std::logic_error past the quota or on internal invariant breach.
std::size_t fmb_next(FmbState& state, const CellView& window, PointId x,
                     const MetricSpace& space);

// Runs the half placer over a fresh n-cell window: places exactly
// ceil(n/2) points, leaving at most 2*sqrt(n) gaps and paying at most
// 11*sqrt(n) times the cost of an optimal walk over the stream's points.
// Reset events are appended to *resets when given (tagged with `level`).
void fill_most_blocks(std::size_t n, CellView window,
                      std::span<const PointId> stream,
                      const MetricSpace& space,
                      std::vector<ResetEvent>* resets = nullptr,
                      std::size_t level = 0);

// The full placer: runs the half placer on the first ceil(n/2) points,
// then recurses on the window's remaining empty cells (treated as one
// contiguous array) with the remaining points. Fills the window and pays
// at most 52*sqrt(n) times the optimal walk cost.
void recursively_fill_most_blocks(std::size_t n, CellView window,
                                  std::span<const PointId> stream,
                                  const MetricSpace& space,
                                  std::vector<ResetEvent>* resets = nullptr,
                                  std::size_t level = 0);

// Naive baseline: each point into the leftmost empty cell.
void leftmost_baseline(std::size_t n, CellView window,
                       std::span<const PointId> stream,
                       const MetricSpace& space);

// Uniform stepwise driver around the placers above. next(x) places x and
// returns the chosen base-array index; it may be called at most capacity()
// times (n for full placers; ceil(n/2) for the half placer "fmb-half").
// Decisions depend only on the points seen so far.
class OnlinePlacer {
public:
    virtual ~OnlinePlacer() = default;
    virtual std::size_t capacity() const = 0;
    virtual std::size_t next(PointId x) = 0;
    virtual const PlacementArray& array() const = 0;
    virtual std::span<const ResetEvent> resets() const { return {}; }
};

// Known names: "rfmb" (full placer), "fmb-half" (half placer, for bound
// experiments), "leftmost". Throws std::invalid_argument on other names.
std::unique_ptr<OnlinePlacer> make_placer(std::string_view name, std::size_t n,
                                          const MetricSpace& space);

const std::vector<std::string_view>& placer_names();

}  // namespace otsp
