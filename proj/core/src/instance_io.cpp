#include "otsp/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace otsp {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json meta_to_json(const StreamMeta& meta) {
    ordered_json j;
    j["generator"] = meta.generator;
    j["params"] = meta.params;
    j["seed"] = meta.seed;
    j["far_served"] = meta.far_served;
    j["epochs"] = meta.epochs;
    return j;
}

StreamMeta meta_from_json(const ordered_json& j) {
    StreamMeta meta;
    meta.generator = j.value("generator", std::string());
    meta.params = j.value("params", std::string());
    meta.seed = j.value("seed", std::uint64_t(0));
    meta.far_served = j.value("far_served", false);
    meta.epochs = j.value("epochs", std::uint64_t(0));
    return meta;
}

}  // namespace

std::string instance_to_json(const AdversaryStream& stream) {
    const MetricSpace& space = *stream.space;
    ordered_json j;
    j["kind"] = to_string(space.kind());
    switch (space.kind()) {
        case SpaceKind::euclidean: {
            j["dim"] = space.dimension();
            ordered_json points = ordered_json::array();
            for (std::uint32_t i = 0; i < space.size(); ++i) {
                const auto c = space.coords_of(PointId{i});
                points.push_back(std::vector<double>(c.begin(), c.end()));
            }
            j["points"] = std::move(points);
            break;
        }
        case SpaceKind::uniform: {
            ordered_json points = ordered_json::array();
            for (std::uint32_t i = 0; i < space.size(); ++i)
                points.push_back(space.label_of(PointId{i}));
            j["points"] = std::move(points);
            break;
        }
        case SpaceKind::matrix: {
            ordered_json points = ordered_json::array();
            for (std::uint32_t i = 0; i < space.size(); ++i)
                points.push_back(space.row_of(PointId{i}));
            j["points"] = std::move(points);
            ordered_json matrix = ordered_json::array();
            for (std::size_t r = 0; r < space.matrix_order(); ++r) {
                ordered_json row = ordered_json::array();
                for (std::size_t s = 0; s < space.matrix_order(); ++s)
                    row.push_back(space.matrix_entry(r, s));
                matrix.push_back(std::move(row));
            }
            j["matrix"] = std::move(matrix);
            break;
        }
        case SpaceKind::two_level_uniform:
            j["base_count"] = space.base_count();
            j["far_distance"] = space.far_distance();
            break;
    }
    ordered_json order = ordered_json::array();
    for (PointId p : stream.order) order.push_back(p.value);
    j["stream"] = std::move(order);
    if (!stream.meta.generator.empty()) j["meta"] = meta_to_json(stream.meta);
    return j.dump();
}

AdversaryStream parse_instance_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("instance JSON parse error: ") +
                                    e.what());
    }
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("instance JSON: missing \"kind\"");
    const std::string kind = j["kind"].get<std::string>();

    MetricSpaceSpec spec;
    if (kind == "euclidean") {
        spec.kind = SpaceKind::euclidean;
        spec.dim = j.value("dim", std::size_t(0));
        for (const auto& p : j.value("points", ordered_json::array()))
            spec.coords.push_back(p.get<std::vector<double>>());
    } else if (kind == "uniform") {
        spec.kind = SpaceKind::uniform;
        for (const auto& p : j.value("points", ordered_json::array()))
            spec.labels.push_back(p.get<std::string>());
    } else if (kind == "matrix") {
        spec.kind = SpaceKind::matrix;
        if (!j.contains("matrix"))
            throw std::invalid_argument("instance JSON: matrix kind needs \"matrix\"");
        for (const auto& row : j["matrix"])
            spec.matrix.push_back(row.get<std::vector<double>>());
        for (const auto& p : j.value("points", ordered_json::array()))
            spec.rows.push_back(p.get<std::uint32_t>());
    } else if (kind == "two_level_uniform") {
        spec.kind = SpaceKind::two_level_uniform;
        spec.base_count = j.value("base_count", std::size_t(0));
        spec.far_distance = j.value("far_distance", 1.0);
    } else {
        throw std::invalid_argument("instance JSON: unknown kind \"" + kind + "\"");
    }

    AdversaryStream stream;
    stream.space =
        std::make_shared<MetricSpace>(MetricSpace::build(std::move(spec)));
    if (j.contains("stream")) {
        for (const auto& v : j["stream"]) {
            const auto id = v.get<std::uint64_t>();
            if (id >= stream.space->size())
                throw std::invalid_argument("instance JSON: stream id " +
                                            std::to_string(id) + " out of range");
            stream.order.push_back(PointId{std::uint32_t(id)});
        }
    } else {
        stream.order.reserve(stream.space->size());
        for (std::uint32_t i = 0; i < stream.space->size(); ++i)
            stream.order.push_back(PointId{i});
    }
    if (j.contains("meta")) stream.meta = meta_from_json(j["meta"]);
    return stream;
}

AdversaryStream load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance_json(buf.str());
}

void save_instance(const AdversaryStream& stream, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << instance_to_json(stream) << '\n';
}

std::string placement_json(const PlacementArray& array) {
    ordered_json j = ordered_json::array();
    for (std::size_t i = 0; i < array.size(); ++i) {
        const auto p = array.at(i);
        if (p)
            j.push_back(p->value);
        else
            j.push_back(nullptr);
    }
    return j.dump();
}

}  // namespace otsp
