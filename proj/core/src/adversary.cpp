#include "otsp/adversary.hpp"

#include <cmath>
#include <stdexcept>

#include "otsp/rng.hpp"
#include "otsp/tour_oracle.hpp"

namespace otsp {

namespace {

using u128 = unsigned __int128;

u128 pow5(u128 v) { return v * v * v * v * v; }

std::string params_string(std::string key, std::uint64_t value) {
    return key + "=" + std::to_string(value);
}

}  // namespace

std::size_t adversary_universe_size(std::size_t n) {
    if (n < 1) throw std::invalid_argument("adversary: n must be >= 1");
    const u128 target = u128(n) * n * n * n;  // n^4
    auto guess =
        static_cast<std::size_t>(std::llround(std::pow(double(n), 0.8)));
    while (guess > 1 && pow5(u128(guess - 1)) >= target) --guess;
    while (pow5(u128(guess)) < target) ++guess;
    return guess;
}

std::shared_ptr<const MetricSpace> adversary_space(std::size_t n) {
    const std::size_t u = adversary_universe_size(n);
    MetricSpaceSpec spec;
    spec.kind = SpaceKind::two_level_uniform;
    spec.base_count = u;
    spec.far_distance = double(u);
    spec.memoize = false;  // distances are O(1); a cache buys nothing
    return std::make_shared<MetricSpace>(MetricSpace::build(std::move(spec)));
}

AdversaryStream oblivious_random_adversary(
    std::size_t n, std::uint64_t seed,
    std::shared_ptr<const MetricSpace> space) {
    const std::size_t u = adversary_universe_size(n);
    if (!space) space = adversary_space(n);
    if (space->kind() != SpaceKind::two_level_uniform ||
        space->base_count() != u)
        throw std::invalid_argument(
            "oblivious_random_adversary: space does not match n");

    AdversaryStream out;
    out.space = std::move(space);
    out.meta.generator = "adversary";
    out.meta.params = params_string("u", u);
    out.meta.seed = seed;
    out.order.reserve(n);

    const double epoch_probability = std::pow(double(n), -0.6);
    const PointId far{std::uint32_t(u)};
    rng::Generator gen(seed);
    while (out.order.size() < n) {
        if (gen.coin(epoch_probability)) {
            out.meta.far_served = true;
            while (out.order.size() < n) out.order.push_back(far);
            break;
        }
        const std::size_t take = std::min(u, n - out.order.size());
        for (std::size_t i = 0; i < take; ++i)
            out.order.push_back(PointId{std::uint32_t(i)});
        if (take == u) ++out.meta.epochs;
    }
    return out;
}

double far_point_probability(std::size_t n) {
    const std::size_t u = adversary_universe_size(n);
    const auto flips = double((n + u - 1) / u);  // ceil(n/u) coin flips
    const double p = std::pow(double(n), -0.6);
    return 1 - std::pow(1 - p, flips);
}

CombInstance comb_instance(std::size_t m) {
    if (m < 1) throw std::invalid_argument("comb_instance: m must be >= 1");
    CombInstance inst;
    MetricSpaceSpec spec;
    spec.kind = SpaceKind::euclidean;
    spec.dim = 1;
    spec.coords.reserve(m + 2);
    inst.points.reserve(m);
    inst.numerators.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        spec.coords.push_back({double(i) / double(m)});
        inst.points.push_back(PointId{std::uint32_t(i)});
        inst.numerators.push_back(std::int64_t(i));
    }
    spec.coords.push_back({0.0});  // a0
    spec.coords.push_back({1.0});  // a1
    inst.space = std::make_shared<MetricSpace>(MetricSpace::build(std::move(spec)));
    inst.a0 = PointId{std::uint32_t(m)};
    inst.a1 = PointId{std::uint32_t(m + 1)};
    inst.ell = 1;
    inst.denominator = m;
    inst.a0_numerator = 0;
    inst.a1_numerator = std::int64_t(m);
    return inst;
}

namespace {

// Exact check over rational coordinates num/den on the line. The optimal
// walk over collinear points runs end to end, so its length is
// (max - min)/den; both inequalities clear the denominators:
//   |x_i - x_j| >= ell/m      <=>  |n_i - n_j| * m >= span
//   |x-a0| + |a1-x| >= ell    <=>  |n_i - a0n| + |a1n - n_i| >= span
bool validate_comb_exact(const CombInstance& inst) {
    using i128 = __int128;
    const std::size_t m = inst.points.size();
    i128 lo = inst.a0_numerator, hi = inst.a0_numerator;
    auto fold = [&](i128 v) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    };
    fold(inst.a1_numerator);
    for (std::int64_t v : inst.numerators) fold(v);
    const i128 span = hi - lo;

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            i128 diff = i128(inst.numerators[i]) - inst.numerators[j];
            if (diff < 0) diff = -diff;
            if (diff * i128(m) < span) return false;
        }
    for (std::size_t i = 0; i < m; ++i) {
        i128 left = i128(inst.numerators[i]) - inst.a0_numerator;
        if (left < 0) left = -left;
        i128 right = i128(inst.a1_numerator) - inst.numerators[i];
        if (right < 0) right = -right;
        if (left + right < span) return false;
    }
    return true;
}

bool validate_comb_float(const CombInstance& inst, const MetricSpace& space,
                         double ell) {
    const std::size_t m = inst.points.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (space.distance(inst.points[i], inst.points[j]) * double(m) < ell)
                return false;
    for (PointId x : inst.points)
        if (space.distance(inst.a0, x) + space.distance(x, inst.a1) < ell)
            return false;
    return true;
}

}  // namespace

bool validate_comb(const CombInstance& inst, const MetricSpace& space) {
    if (inst.points.empty()) return false;

    // Recompute ell from the space and cross-check the stored value.
    std::vector<PointId> all = inst.points;
    all.push_back(inst.a0);
    all.push_back(inst.a1);
    const TourBounds bounds = opt_bounds(space, all, /*want_exact=*/true);
    const double tol = 1e-12 * std::max(1.0, std::abs(inst.ell));
    if (bounds.exact) {
        if (std::abs(*bounds.exact - inst.ell) > tol) return false;
    } else {
        if (inst.ell < bounds.lower - tol || inst.ell > bounds.upper + tol)
            return false;
    }

    if (!inst.numerators.empty()) {
        if (inst.numerators.size() != inst.points.size() ||
            inst.denominator == 0)
            return false;
        // Rational ell must agree with the stored one.
        using i128 = __int128;
        i128 lo = inst.a0_numerator, hi = inst.a0_numerator;
        auto fold = [&](i128 v) {
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        };
        fold(inst.a1_numerator);
        for (std::int64_t v : inst.numerators) fold(v);
        const double rational_ell =
            double(std::int64_t(hi - lo)) / double(inst.denominator);
        if (std::abs(rational_ell - inst.ell) > tol) return false;
        return validate_comb_exact(inst);
    }
    return validate_comb_float(inst, space, inst.ell);
}

AdversaryStream comb_stream(std::size_t n) {
    std::size_t m = 1;
    while ((m + 1) * (m + 1) <= n) ++m;  // floor(sqrt(n)), never 0
    const CombInstance inst = comb_instance(m);
    AdversaryStream out;
    out.space = inst.space;
    out.meta.generator = "comb";
    out.meta.params = params_string("m", m);
    out.order.reserve(n);
    if (n >= 1) out.order.push_back(inst.a0);
    if (n >= 2) out.order.push_back(inst.a1);
    for (std::size_t i = 0; out.order.size() < n; ++i)
        out.order.push_back(inst.points[i % m]);
    return out;
}

AdversaryStream random_stream_euclidean(std::size_t dim, std::size_t n,
                                        std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("random_stream_euclidean: dim >= 1");
    rng::Generator gen(seed);
    MetricSpaceSpec spec;
    spec.kind = SpaceKind::euclidean;
    spec.dim = dim;
    spec.coords.resize(n);
    for (auto& point : spec.coords) {
        point.resize(dim);
        for (double& c : point) c = gen.unit();
    }
    AdversaryStream out;
    out.space = std::make_shared<MetricSpace>(MetricSpace::build(std::move(spec)));
    out.meta.generator = "euclidean";
    out.meta.params = params_string("dim", dim);
    out.meta.seed = seed;
    out.order.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.order.push_back(PointId{std::uint32_t(i)});
    return out;
}

AdversaryStream random_stream_uniform(std::size_t label_count, std::size_t n,
                                      std::uint64_t seed) {
    if (label_count < 1)
        throw std::invalid_argument("random_stream_uniform: label_count >= 1");
    rng::Generator gen(seed);
    MetricSpaceSpec spec;
    spec.kind = SpaceKind::uniform;
    spec.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        spec.labels.push_back("L" + std::to_string(gen.below(label_count)));
    AdversaryStream out;
    out.space = std::make_shared<MetricSpace>(MetricSpace::build(std::move(spec)));
    out.meta.generator = "uniform";
    out.meta.params = params_string("k", label_count);
    out.meta.seed = seed;
    out.order.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.order.push_back(PointId{std::uint32_t(i)});
    return out;
}

std::vector<std::vector<double>> random_valid_matrix(std::size_t order,
                                                     double scale,
                                                     std::uint64_t seed) {
    if (order < 1 || !(scale > 0))
        throw std::invalid_argument("random_valid_matrix: bad parameters");
    rng::Generator gen(seed);
    std::vector<std::vector<double>> m(order, std::vector<double>(order, 0));
    // Entries in [scale, 2*scale]: any three satisfy the triangle
    // inequality since min+min >= max.
    for (std::size_t i = 0; i < order; ++i)
        for (std::size_t j = i + 1; j < order; ++j)
            m[i][j] = m[j][i] = scale * (1 + gen.unit());
    return m;
}

AdversaryStream random_stream_matrix(std::size_t order, std::size_t n,
                                     std::uint64_t seed) {
    MetricSpaceSpec spec;
    spec.kind = SpaceKind::matrix;
    spec.matrix = random_valid_matrix(order, 1.0, rng::derive_seed(seed, 0));
    rng::Generator gen(rng::derive_seed(seed, 1));
    spec.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        spec.rows.push_back(std::uint32_t(gen.below(order)));
    AdversaryStream out;
    out.space = std::make_shared<MetricSpace>(MetricSpace::build(std::move(spec)));
    out.meta.generator = "matrix";
    out.meta.params = params_string("order", order);
    out.meta.seed = seed;
    out.order.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.order.push_back(PointId{std::uint32_t(i)});
    return out;
}

}  // namespace otsp
