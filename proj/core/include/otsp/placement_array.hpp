#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "otsp/metric.hpp"

namespace otsp {

// The fixed-length array points are placed into, one by one, irrevocably.
// Cost is the summed distance over adjacent *occupied* pairs; a gap is a
// maximal run of empty cells. The gap count is maintained in O(1) per
// placement by looking at the two neighbours of the written cell.
class PlacementArray {
public:
    explicit PlacementArray(std::size_t n);

    std::size_t size() const { return cells_.size(); }
    std::size_t filled() const { return filled_; }
    bool full() const { return filled_ == cells_.size(); }
    bool occupied(std::size_t i) const;
    std::optional<PointId> at(std::size_t i) const;

    // Writes x into empty cell i. Throws std::out_of_range on a bad index
    // and std::logic_error when the cell is already occupied.
    void place(std::size_t i, PointId x);

    // Number of maximal empty runs, updated incrementally on every place.
    std::size_t gaps() const { return gaps_; }

    // Sum of d(A[i], A[i+1]) over all i where both cells are occupied.
    double cost(const MetricSpace& space) const;

    std::vector<std::size_t> empty_indices() const;

private:
    static constexpr std::uint32_t kEmpty = 0xFFFFFFFFu;
    std::vector<std::uint32_t> cells_;
    std::size_t filled_ = 0;
    std::size_t gaps_ = 0;
};

// Order-preserving window onto a PlacementArray: view index i maps to a
// fixed array cell. Placing through the view writes to the underlying
// array. Views compose — empty_view() of a view yields a view (onto the
// same array) of exactly the cells currently empty, in order, which is how
// the halving recursion treats "the empty cells as one contiguous array".
class CellView {
public:
    explicit CellView(PlacementArray& array);  // whole-array identity view

    std::size_t size() const;
    bool occupied(std::size_t i) const;
    std::size_t base_index(std::size_t i) const;
    void place(std::size_t i, PointId x);

    CellView empty_view() const;

    PlacementArray& array() const { return *array_; }

private:
    CellView(PlacementArray& array, std::vector<std::uint32_t> map);

    PlacementArray* array_;
    bool identity_ = true;             // maps i -> i over the whole array
    std::vector<std::uint32_t> map_;   // used when !identity_
};

inline CellView empty_view(PlacementArray& array) {
    return CellView(array).empty_view();
}

}  // namespace otsp
