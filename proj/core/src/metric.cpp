#include "otsp/metric.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace otsp {

namespace {

constexpr std::size_t kMemoAutoCap = 2048;  // memoize spaces up to this size
constexpr double kEuclideanTolerance = 1e-9;

std::size_t tri_index(std::uint32_t a, std::uint32_t b) {
    // a < b required; index into the strict upper triangle.
    return static_cast<std::size_t>(b) * (b - 1) / 2 + a;
}

void require(bool cond, const std::string& message) {
    if (!cond) throw std::invalid_argument(message);
}

}  // namespace

const char* to_string(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::euclidean: return "euclidean";
        case SpaceKind::uniform: return "uniform";
        case SpaceKind::matrix: return "matrix";
        case SpaceKind::two_level_uniform: return "two_level_uniform";
    }
    return "unknown";
}

std::string MetricViolation::describe() const {
    std::ostringstream out;
    switch (axiom) {
        case Axiom::non_negative:
            out << "negative entry: d(" << i << "," << j << ") = " << -gap;
            break;
        case Axiom::symmetric:
            out << "asymmetric pair: d(" << i << "," << j << ") != d(" << j
                << "," << i << ") (difference " << gap << ")";
            break;
        case Axiom::zero_diagonal:
            out << "nonzero diagonal: d(" << i << "," << i << ") = " << gap;
            break;
        case Axiom::triangle:
            out << "triangle violated: d(" << i << "," << j << ") exceeds d("
                << i << "," << k << ") + d(" << k << "," << j << ") by " << gap;
            break;
    }
    return out.str();
}

ValidationReport validate_matrix_metric(const std::vector<std::vector<double>>& m) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        require(row.size() == n, "matrix is not square");

    ValidationReport report;
    using Axiom = MetricViolation::Axiom;
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i][i] != 0)
            report.violations.push_back({Axiom::zero_diagonal, i, i, 0, m[i][i]});
        for (std::size_t j = i + 1; j < n; ++j) {
            if (m[i][j] < 0)
                report.violations.push_back({Axiom::non_negative, i, j, 0, -m[i][j]});
            if (m[i][j] != m[j][i])
                report.violations.push_back(
                    {Axiom::symmetric, i, j, 0, m[i][j] - m[j][i]});
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double slack = m[i][k] + m[k][j] - m[i][j];
                if (slack < 0)
                    report.violations.push_back({Axiom::triangle, i, j, k, -slack});
            }
    return report;
}

void MetricSpace::check_id(PointId p) const {
    if (p.value >= count_)
        throw std::out_of_range("point id " + std::to_string(p.value) +
                                " out of range (size " + std::to_string(count_) + ")");
}

double MetricSpace::compute(PointId p, PointId q) const {
    switch (kind_) {
        case SpaceKind::euclidean: {
            const double* a = coords_.data() + std::size_t(p.value) * dim_;
            const double* b = coords_.data() + std::size_t(q.value) * dim_;
            double sum = 0;
            for (std::size_t d = 0; d < dim_; ++d) {
                const double diff = a[d] - b[d];
                sum += diff * diff;
            }
            return std::sqrt(sum);
        }
        case SpaceKind::uniform:
            return label_ids_[p.value] == label_ids_[q.value] ? 0.0 : 1.0;
        case SpaceKind::matrix:
            return matrix_[std::size_t(rows_[p.value]) * matrix_order_ + rows_[q.value]];
        case SpaceKind::two_level_uniform:
            return (p.value < base_count_ && q.value < base_count_) ? 1.0
                                                                    : far_distance_;
    }
    throw std::logic_error("unhandled space kind");
}

double MetricSpace::distance(PointId p, PointId q) const {
    check_id(p);
    check_id(q);
    if (p.value == q.value) return 0;
    if (memo_) {
        const std::uint32_t lo = std::min(p.value, q.value);
        const std::uint32_t hi = std::max(p.value, q.value);
        std::atomic<double>& slot = memo_[tri_index(lo, hi)];
        const double cached = slot.load(std::memory_order_relaxed);
        if (!std::isnan(cached)) return cached;
        const double d = compute(p, q);
        slot.store(d, std::memory_order_relaxed);
        return d;
    }
    return compute(p, q);
}

PointId MetricSpace::canonical(PointId p) const {
    check_id(p);
    return PointId{canonical_[p.value]};
}

double MetricSpace::comparison_tolerance() const {
    return kind_ == SpaceKind::euclidean ? kEuclideanTolerance : 0.0;
}

bool MetricSpace::within(double d, double r) const {
    const double tol = comparison_tolerance();
    if (tol == 0) return d <= r;
    return d <= r + tol * std::max(std::abs(d), std::abs(r));
}

std::span<const double> MetricSpace::coords_of(PointId p) const {
    check_id(p);
    require(kind_ == SpaceKind::euclidean, "coords_of: not a euclidean space");
    return {coords_.data() + std::size_t(p.value) * dim_, dim_};
}

const std::string& MetricSpace::label_of(PointId p) const {
    check_id(p);
    require(kind_ == SpaceKind::uniform, "label_of: not a uniform space");
    return labels_[p.value];
}

std::uint32_t MetricSpace::row_of(PointId p) const {
    check_id(p);
    require(kind_ == SpaceKind::matrix, "row_of: not a matrix space");
    return rows_[p.value];
}

double MetricSpace::matrix_entry(std::size_t r, std::size_t s) const {
    require(kind_ == SpaceKind::matrix, "matrix_entry: not a matrix space");
    require(r < matrix_order_ && s < matrix_order_, "matrix_entry: out of range");
    return matrix_[r * matrix_order_ + s];
}

void MetricSpace::finish_build() {
    // Canonical representative per point: the smallest id at distance 0.
    canonical_.resize(count_);
    switch (kind_) {
        case SpaceKind::euclidean: {
            // Map exact coordinate tuples to their first occurrence. Two
            // points are duplicates iff all coordinates compare equal.
            std::map<std::vector<double>, std::uint32_t> first;
            std::vector<double> key(dim_);
            for (std::uint32_t i = 0; i < count_; ++i) {
                key.assign(coords_.begin() + std::size_t(i) * dim_,
                           coords_.begin() + std::size_t(i + 1) * dim_);
                auto [it, inserted] = first.try_emplace(key, i);
                canonical_[i] = it->second;
            }
            break;
        }
        case SpaceKind::uniform: {
            std::vector<std::uint32_t> first(labels_.size(), 0);
            std::vector<bool> seen(labels_.size(), false);
            for (std::uint32_t i = 0; i < count_; ++i) {
                const std::uint32_t lid = label_ids_[i];
                if (!seen[lid]) {
                    seen[lid] = true;
                    first[lid] = i;
                }
                canonical_[i] = first[lid];
            }
            break;
        }
        case SpaceKind::matrix: {
            // Rows at distance 0 denote the same point; union them.
            std::vector<std::uint32_t> parent(matrix_order_);
            std::iota(parent.begin(), parent.end(), 0u);
            auto find = [&](std::uint32_t v) {
                while (parent[v] != v) v = parent[v] = parent[parent[v]];
                return v;
            };
            for (std::size_t r = 0; r < matrix_order_; ++r)
                for (std::size_t s = r + 1; s < matrix_order_; ++s)
                    if (matrix_[r * matrix_order_ + s] == 0) {
                        const auto a = find(std::uint32_t(r)), b = find(std::uint32_t(s));
                        if (a != b) parent[std::max(a, b)] = std::min(a, b);
                    }
            std::vector<std::uint32_t> first(matrix_order_, std::uint32_t(-1));
            for (std::uint32_t i = 0; i < count_; ++i) {
                const std::uint32_t root = find(rows_[i]);
                if (first[root] == std::uint32_t(-1)) first[root] = i;
                canonical_[i] = first[root];
            }
            break;
        }
        case SpaceKind::two_level_uniform:
            std::iota(canonical_.begin(), canonical_.end(), 0u);
            break;
    }
}

MetricSpace MetricSpace::build(MetricSpaceSpec spec) {
    MetricSpace s;
    s.kind_ = spec.kind;
    switch (spec.kind) {
        case SpaceKind::euclidean: {
            std::size_t dim = spec.dim;
            if (dim == 0 && !spec.coords.empty()) dim = spec.coords[0].size();
            s.dim_ = dim;
            s.count_ = spec.coords.size();
            s.coords_.reserve(s.count_ * dim);
            for (std::size_t i = 0; i < spec.coords.size(); ++i) {
                const auto& c = spec.coords[i];
                require(c.size() == dim,
                        "euclidean point " + std::to_string(i) + " has " +
                            std::to_string(c.size()) + " coords, expected " +
                            std::to_string(dim));
                for (double v : c) {
                    require(std::isfinite(v), "non-finite coordinate");
                    s.coords_.push_back(v);
                }
            }
            break;
        }
        case SpaceKind::uniform: {
            s.count_ = spec.labels.size();
            s.labels_ = std::move(spec.labels);
            s.label_ids_.resize(s.count_);
            std::unordered_map<std::string, std::uint32_t> intern;
            for (std::uint32_t i = 0; i < s.count_; ++i) {
                auto [it, inserted] = intern.try_emplace(
                    s.labels_[i], std::uint32_t(intern.size()));
                s.label_ids_[i] = it->second;
            }
            break;
        }
        case SpaceKind::matrix: {
            const std::size_t m = spec.matrix.size();
            for (const auto& row : spec.matrix)
                require(row.size() == m, "matrix is not square");
            if (spec.validate) {
                const ValidationReport report = validate_matrix_metric(spec.matrix);
                if (!report.ok())
                    throw std::invalid_argument(
                        "matrix is not a metric (" +
                        std::to_string(report.violations.size()) +
                        " violation(s); first: " +
                        report.violations.front().describe() + ")");
            }
            s.matrix_order_ = m;
            s.matrix_.reserve(m * m);
            for (const auto& row : spec.matrix)
                for (double v : row) {
                    require(std::isfinite(v), "non-finite matrix entry");
                    s.matrix_.push_back(v);
                }
            if (spec.rows.empty()) {
                s.rows_.resize(m);
                std::iota(s.rows_.begin(), s.rows_.end(), 0u);
            } else {
                for (std::uint32_t r : spec.rows)
                    require(r < m, "matrix row index " + std::to_string(r) +
                                       " out of range (order " + std::to_string(m) + ")");
                s.rows_ = std::move(spec.rows);
            }
            s.count_ = s.rows_.size();
            break;
        }
        case SpaceKind::two_level_uniform: {
            require(std::isfinite(spec.far_distance) && spec.far_distance >= 0.5,
                    "two_level_uniform far_distance must be >= 0.5 to stay a metric");
            s.base_count_ = spec.base_count;
            s.far_distance_ = spec.far_distance;
            s.count_ = spec.base_count + 1;
            break;
        }
    }
    require(s.count_ <= std::size_t(std::numeric_limits<std::uint32_t>::max()),
            "space too large");
    s.finish_build();
    if (spec.memoize && s.count_ >= 2 && s.count_ <= kMemoAutoCap) {
        s.memo_pairs_ = s.count_ * (s.count_ - 1) / 2;
        s.memo_ = std::make_unique<std::atomic<double>[]>(s.memo_pairs_);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 0; i < s.memo_pairs_; ++i)
            s.memo_[i].store(nan, std::memory_order_relaxed);
    }
    return s;
}

}  // namespace otsp
