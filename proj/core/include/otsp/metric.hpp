#pragma once

#include <atomic>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace otsp {

// Index of a point in a metric space's point table. Distinct ids may carry
// equal point data; such duplicates are at distance 0 and equality of points
// is *defined* as distance 0.
struct PointId {
    std::uint32_t value = 0;
    friend constexpr bool operator==(PointId, PointId) = default;
    friend constexpr auto operator<=>(PointId, PointId) = default;
};

enum class SpaceKind {
    euclidean,          // points in R^d, L2 distance
    uniform,            // labelled points, distance 1 between distinct labels
    matrix,             // explicit symmetric distance matrix
    two_level_uniform,  // m base points pairwise 1 apart plus one far point
};

const char* to_string(SpaceKind kind);

// One entry of a metric violation report. `witness` ids are row indices of
// the offending entries; `gap` is the amount by which the axiom fails.
struct MetricViolation {
    enum class Axiom { non_negative, symmetric, zero_diagonal, triangle };
    Axiom axiom;
    std::size_t i = 0, j = 0, k = 0;
    double gap = 0;
    std::string describe() const;
};

struct ValidationReport {
    std::vector<MetricViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks symmetry, zero diagonal, non-negativity and the triangle
// inequality on a dense matrix. Theta(m^3) — intended for moderate m.
ValidationReport validate_matrix_metric(const std::vector<std::vector<double>>& m);

// Build-time description of a space. Exactly the fields relevant to `kind`
// are read; the rest are ignored.
struct MetricSpaceSpec {
    SpaceKind kind = SpaceKind::uniform;

    // euclidean
    std::size_t dim = 0;
    std::vector<std::vector<double>> coords;

    // uniform
    std::vector<std::string> labels;

    // matrix: `matrix` gives pairwise distances between matrix rows;
    // `rows` maps point ids onto matrix rows (identity when empty).
    std::vector<std::vector<double>> matrix;
    std::vector<std::uint32_t> rows;

    // two_level_uniform: ids 0..base_count-1 are pairwise 1 apart,
    // id base_count is the far point at `far_distance` from every base point.
    std::size_t base_count = 0;
    double far_distance = 1;

    // Run the Theta(m^3) validation on matrix input (rejects on violation).
    bool validate = false;

    // Cache computed distances for small spaces. Caching is semantics-free:
    // results are bit-identical with it on or off.
    bool memoize = true;
};

// Immutable finite metric space over ids 0..size()-1.
//
// Distances are exact for uniform / matrix / two_level_uniform kinds and
// computed in double precision for euclidean, where comparisons made by
// callers should allow a 1e-9 relative tolerance (see comparison_tolerance).
class MetricSpace {
public:
    static MetricSpace build(MetricSpaceSpec spec);

    std::size_t size() const { return count_; }
    SpaceKind kind() const { return kind_; }
    std::size_t dimension() const { return dim_; }

    // d(p, q). Throws std::out_of_range on an unknown id.
    double distance(PointId p, PointId q) const;

    // Smallest id whose point data equals p's (distance 0). Precomputed;
    // lets callers deduplicate streams in O(1) per point.
    PointId canonical(PointId p) const;

    // Distance comparison "d <= r" under this space's tolerance regime:
    // exact for combinatorial kinds, 1e-9 relative slack for euclidean.
    bool within(double d, double r) const;
    double comparison_tolerance() const;

    // Accessors used by serialization and tests.
    std::span<const double> coords_of(PointId p) const;
    const std::string& label_of(PointId p) const;
    std::uint32_t row_of(PointId p) const;
    std::size_t matrix_order() const { return matrix_order_; }
    double matrix_entry(std::size_t r, std::size_t s) const;
    std::size_t base_count() const { return base_count_; }
    double far_distance() const { return far_distance_; }
    bool memoized() const { return memo_ != nullptr; }

    MetricSpace(MetricSpace&&) noexcept = default;
    MetricSpace& operator=(MetricSpace&&) noexcept = default;
    MetricSpace(const MetricSpace&) = delete;
    MetricSpace& operator=(const MetricSpace&) = delete;

private:
    MetricSpace() = default;

    double compute(PointId p, PointId q) const;
    void check_id(PointId p) const;
    void finish_build();

    SpaceKind kind_ = SpaceKind::uniform;
    std::size_t count_ = 0;
    std::size_t dim_ = 0;

    std::vector<double> coords_;            // euclidean, count_ * dim_
    std::vector<std::string> labels_;       // uniform & two_level (for export)
    std::vector<std::uint32_t> label_ids_;  // uniform, interned labels
    std::vector<double> matrix_;            // matrix kind, row-major
    std::size_t matrix_order_ = 0;
    std::vector<std::uint32_t> rows_;       // matrix kind, id -> row
    std::size_t base_count_ = 0;            // two_level
    double far_distance_ = 1;               // two_level

    std::vector<std::uint32_t> canonical_;

    // Triangular cache of computed distances, NaN = absent. Entries are a
    // pure function of (p, q), so racing writers store the same value and
    // relaxed atomics suffice.
    mutable std::unique_ptr<std::atomic<double>[]> memo_;
    std::size_t memo_pairs_ = 0;
};

}  // namespace otsp
