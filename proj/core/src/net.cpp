#include "otsp/net.hpp"

#include <stdexcept>

#include "otsp/tour_oracle.hpp"

namespace otsp {

std::optional<std::size_t> covering_center(const Net& net, PointId x,
                                           const MetricSpace& space) {
    for (std::size_t i = 0; i < net.centers.size(); ++i)
        if (space.within(space.distance(net.centers[i], x), net.radius))
            return i;
    return std::nullopt;
}

bool increase_net(Net& net, PointId x, const MetricSpace& space) {
    if (covering_center(net, x, space)) return false;
    net.centers.push_back(x);
    return true;
}

bool verify_net(const Net& net, std::span<const PointId> X,
                const MetricSpace& space) {
    for (PointId x : X)
        if (!covering_center(net, x, space)) return false;
    for (std::size_t i = 0; i < net.centers.size(); ++i)
        for (std::size_t j = i + 1; j < net.centers.size(); ++j) {
            const double d = space.distance(net.centers[i], net.centers[j]);
            if (space.within(d, net.radius) && d != 0) return false;
            // Distance-0 "centers" cannot arise via increase_net; a caller
            // may still build such a net by hand, and duplicates denote the
            // same point, so they do not break packing.
        }
    return true;
}

double net_size_slack(const Net& net, std::span<const PointId> X,
                      const MetricSpace& space) {
    if (!verify_net(net, X, space))
        throw std::invalid_argument("net_size_slack: net does not verify against X");
    const double mst = X.empty() ? 0.0 : mst_weight(space, X);
    const double k = net.centers.empty()
                         ? 0.0
                         : static_cast<double>(net.centers.size() - 1);
    return 2 * mst - k * net.radius;
}

}  // namespace otsp
