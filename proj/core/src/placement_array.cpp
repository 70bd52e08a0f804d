#include "otsp/placement_array.hpp"

#include <stdexcept>
#include <string>

namespace otsp {

PlacementArray::PlacementArray(std::size_t n)
    : cells_(n, kEmpty), gaps_(n == 0 ? 0 : 1) {}

bool PlacementArray::occupied(std::size_t i) const {
    if (i >= cells_.size())
        throw std::out_of_range("cell index " + std::to_string(i) +
                                " out of range (size " +
                                std::to_string(cells_.size()) + ")");
    return cells_[i] != kEmpty;
}

std::optional<PointId> PlacementArray::at(std::size_t i) const {
    if (!occupied(i)) return std::nullopt;
    return PointId{cells_[i]};
}

void PlacementArray::place(std::size_t i, PointId x) {
    if (occupied(i))
        throw std::logic_error("cell " + std::to_string(i) +
                               " already occupied (placements are irrevocable)");
    cells_[i] = x.value;
    ++filled_;
    // The write splits, shrinks, or closes the empty run it lands in:
    // empty on both sides -> the run splits (+1 gap); occupied or boundary
    // on both sides -> a length-1 run closes (-1); mixed -> count unchanged.
    const bool left_empty = i > 0 && cells_[i - 1] == kEmpty;
    const bool right_empty = i + 1 < cells_.size() && cells_[i + 1] == kEmpty;
    if (left_empty && right_empty)
        ++gaps_;
    else if (!left_empty && !right_empty)
        --gaps_;
}

double PlacementArray::cost(const MetricSpace& space) const {
    double sum = 0;
    for (std::size_t i = 0; i + 1 < cells_.size(); ++i)
        if (cells_[i] != kEmpty && cells_[i + 1] != kEmpty)
            sum += space.distance(PointId{cells_[i]}, PointId{cells_[i + 1]});
    return sum;
}

std::vector<std::size_t> PlacementArray::empty_indices() const {
    std::vector<std::size_t> out;
    out.reserve(cells_.size() - filled_);
    for (std::size_t i = 0; i < cells_.size(); ++i)
        if (cells_[i] == kEmpty) out.push_back(i);
    return out;
}

CellView::CellView(PlacementArray& array) : array_(&array) {}

CellView::CellView(PlacementArray& array, std::vector<std::uint32_t> map)
    : array_(&array), identity_(false), map_(std::move(map)) {}

std::size_t CellView::size() const {
    return identity_ ? array_->size() : map_.size();
}

std::size_t CellView::base_index(std::size_t i) const {
    if (i >= size())
        throw std::out_of_range("view index " + std::to_string(i) +
                                " out of range (size " +
                                std::to_string(size()) + ")");
    return identity_ ? i : map_[i];
}

bool CellView::occupied(std::size_t i) const {
    return array_->occupied(base_index(i));
}

void CellView::place(std::size_t i, PointId x) {
    array_->place(base_index(i), x);
}

CellView CellView::empty_view() const {
    std::vector<std::uint32_t> map;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t base = identity_ ? i : map_[i];
        if (!array_->occupied(base)) map.push_back(std::uint32_t(base));
    }
    return CellView(*array_, std::move(map));
}

}  // namespace otsp
