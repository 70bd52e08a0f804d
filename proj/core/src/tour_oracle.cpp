#include "otsp/tour_oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace otsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lexicographic key of the undirected edge {a, b}.
std::pair<std::uint32_t, std::uint32_t> edge_key(PointId a, PointId b) {
    return {std::min(a.value, b.value), std::max(a.value, b.value)};
}

double held_karp(const MetricSpace& space, const std::vector<PointId>& reps) {
    const std::size_t k = reps.size();
    if (k == 1) return 0;
    std::vector<double> d(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            d[i * k + j] = space.distance(reps[i], reps[j]);

    // dp[mask * k + v] = shortest path covering `mask`, ending at v.
    std::vector<double> dp((std::size_t(1) << k) * k, kInf);
    for (std::size_t v = 0; v < k; ++v)
        dp[(std::size_t(1) << v) * k + v] = 0;
    const std::size_t full = (std::size_t(1) << k) - 1;
    for (std::size_t mask = 1; mask <= full; ++mask) {
        for (std::size_t v = 0; v < k; ++v) {
            if (!(mask & (std::size_t(1) << v))) continue;
            const double base = dp[mask * k + v];
            if (base == kInf) continue;
            for (std::size_t u = 0; u < k; ++u) {
                if (mask & (std::size_t(1) << u)) continue;
                const std::size_t next = mask | (std::size_t(1) << u);
                double& slot = dp[next * k + u];
                const double cand = base + d[v * k + u];
                if (cand < slot) slot = cand;
            }
        }
    }
    double best = kInf;
    for (std::size_t v = 0; v < k; ++v)
        best = std::min(best, dp[full * k + v]);
    return best;
}

Walk preorder_walk(const MetricSpace& space, const SpanningTree& tree) {
    const std::size_t k = tree.vertices.size();
    Walk walk;
    if (k == 0) return walk;
    walk.order.reserve(k);
    if (k == 1) {
        walk.order.push_back(tree.vertices[0]);
        return walk;
    }
    // index of each vertex within tree.vertices (ascending ids -> binary search)
    auto index_of = [&](PointId p) {
        return std::size_t(std::lower_bound(tree.vertices.begin(),
                                            tree.vertices.end(), p) -
                           tree.vertices.begin());
    };
    std::vector<std::vector<std::uint32_t>> children(k);
    for (const auto& [parent, child] : tree.edges)
        children[index_of(parent)].push_back(std::uint32_t(index_of(child)));
    for (auto& c : children) std::sort(c.begin(), c.end());

    std::vector<std::uint32_t> stack{0};  // root = smallest id
    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        walk.order.push_back(tree.vertices[v]);
        for (auto it = children[v].rbegin(); it != children[v].rend(); ++it)
            stack.push_back(*it);
    }
    for (std::size_t i = 1; i < walk.order.size(); ++i)
        walk.length += space.distance(walk.order[i - 1], walk.order[i]);
    return walk;
}

}  // namespace

std::vector<PointId> distinct_points(const MetricSpace& space,
                                     std::span<const PointId> points) {
    std::vector<PointId> reps;
    reps.reserve(points.size());
    for (PointId p : points) reps.push_back(space.canonical(p));
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    return reps;
}

SpanningTree minimum_spanning_tree(const MetricSpace& space,
                                   std::span<const PointId> points) {
    SpanningTree tree;
    tree.vertices = distinct_points(space, points);
    const std::size_t k = tree.vertices.size();
    if (k <= 1) return tree;

    std::vector<char> in_tree(k, 0);
    std::vector<double> key(k);
    std::vector<std::uint32_t> parent(k, 0);
    in_tree[0] = 1;
    for (std::size_t v = 1; v < k; ++v)
        key[v] = space.distance(tree.vertices[0], tree.vertices[v]);

    tree.edges.reserve(k - 1);
    for (std::size_t step = 1; step < k; ++step) {
        std::size_t best = std::size_t(-1);
        for (std::size_t v = 1; v < k; ++v) {
            if (in_tree[v]) continue;
            if (best == std::size_t(-1) || key[v] < key[best]) {
                best = v;
            } else if (key[v] == key[best] &&
                       edge_key(tree.vertices[parent[v]], tree.vertices[v]) <
                           edge_key(tree.vertices[parent[best]], tree.vertices[best])) {
                best = v;
            }
        }
        in_tree[best] = 1;
        tree.weight += key[best];
        tree.edges.emplace_back(tree.vertices[parent[best]], tree.vertices[best]);
        for (std::size_t v = 1; v < k; ++v) {
            if (in_tree[v]) continue;
            const double d = space.distance(tree.vertices[best], tree.vertices[v]);
            if (d < key[v] ||
                (d == key[v] &&
                 edge_key(tree.vertices[best], tree.vertices[v]) <
                     edge_key(tree.vertices[parent[v]], tree.vertices[v]))) {
                key[v] = d;
                parent[v] = std::uint32_t(best);
            }
        }
    }
    return tree;
}

double mst_weight(const MetricSpace& space, std::span<const PointId> points) {
    if (points.empty())
        throw std::invalid_argument("mst_weight: empty point set");
    return minimum_spanning_tree(space, points).weight;
}

double exact_opt(const MetricSpace& space, std::span<const PointId> points,
                 std::size_t cap) {
    const std::vector<PointId> reps = distinct_points(space, points);
    if (reps.empty())
        throw std::invalid_argument("exact_opt: empty point set");
    if (reps.size() > cap)
        throw std::length_error("exact_opt: " + std::to_string(reps.size()) +
                                " distinct points exceed cap " +
                                std::to_string(cap));
    return held_karp(space, reps);
}

Walk doubling_walk(const MetricSpace& space, std::span<const PointId> points) {
    const SpanningTree tree = minimum_spanning_tree(space, points);
    if (tree.vertices.empty())
        throw std::invalid_argument("doubling_walk: empty point set");
    return preorder_walk(space, tree);
}

TourBounds opt_bounds(const MetricSpace& space, std::span<const PointId> points,
                      bool want_exact, std::size_t cap) {
    TourBounds b;
    if (points.empty())
        throw std::invalid_argument("opt_bounds: empty point set");
    const SpanningTree tree = minimum_spanning_tree(space, points);
    b.mst = tree.weight;
    b.lower = tree.weight;
    const Walk walk = preorder_walk(space, tree);
    b.upper = std::min(2 * tree.weight, walk.length);
    if (want_exact && tree.vertices.size() <= cap)
        b.exact = held_karp(space, tree.vertices);
    return b;
}

}  // namespace otsp
