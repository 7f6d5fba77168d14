#include "probepack/perception.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace probepack {

namespace {

nlohmann::json view_to_json(const SceneObjectView& v) {
    return nlohmann::json{{"id", v.id},
                          {"centroid", {v.centroid.x, v.centroid.y}},
                          {"color", v.color},
                          {"dimension", to_string(v.dimension)},
                          {"shape", to_string(v.shape)}};
}

SceneObjectView view_from_json(const nlohmann::json& j) {
    SceneObjectView v;
    v.id = j.at("id").get<std::string>();
    v.centroid.x = j.at("centroid").at(0).get<double>();
    v.centroid.y = j.at("centroid").at(1).get<double>();
    v.color = j.at("color").get<std::string>();
    auto dim = parse_dimension(j.at("dimension").get<std::string>());
    auto shape = parse_shape(j.at("shape").get<std::string>());
    if (!dim || !shape) throw FileError("bad dimension/shape in scene view for id " + v.id);
    v.dimension = *dim;
    v.shape = *shape;
    return v;
}

}  // namespace

SceneSpec scene_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FileError(std::string("bad scene json: ") + e.what());
    }
    SceneSpec s;
    try {
        for (const auto& v : j.at("views").at("top")) s.top.push_back(view_from_json(v));
        for (const auto& v : j.at("views").at("side")) s.side.push_back(view_from_json(v));
        if (j.contains("ground_truth")) {
            for (auto it = j["ground_truth"].begin(); it != j["ground_truth"].end(); ++it) {
                auto p = parse_property(it.value().get<std::string>());
                if (!p) throw FileError("unknown property in scene ground truth");
                s.ground_truth[it.key()] = *p;
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw FileError(std::string("bad scene json: ") + e.what());
    }
    return s;
}

std::string scene_to_json_text(const SceneSpec& scene) {
    nlohmann::json j;
    j["views"]["top"] = nlohmann::json::array();
    j["views"]["side"] = nlohmann::json::array();
    for (const auto& v : scene.top) j["views"]["top"].push_back(view_to_json(v));
    for (const auto& v : scene.side) j["views"]["side"].push_back(view_to_json(v));
    j["ground_truth"] = nlohmann::json::object();
    for (const auto& [id, p] : scene.ground_truth) j["ground_truth"][id] = to_string(p);
    return j.dump(2) + "\n";
}

SceneSpec load_scene(const std::string& path) { return scene_from_json_text(read_text_file(path)); }

void save_scene(const SceneSpec& scene, const std::string& path) {
    write_text_file(path, scene_to_json_text(scene));
}

bool DetectionGraph::has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::find(edges.begin(), edges.end(), std::pair{a, b}) != edges.end();
}

DetectionGraph build_detection_graph(const std::vector<Point2>& points) {
    const int n = static_cast<int>(points.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (points[i] == points[j])
                throw DuplicatePoint("points " + std::to_string(i) + " and " + std::to_string(j) +
                                     " coincide");
        }
    }

    DetectionGraph g;
    g.vertex_count = n;
    if (n < 2) return g;

    const int k = std::min(3, n - 1);
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> by_distance;
        by_distance.reserve(n - 1);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double dx = points[i].x - points[j].x;
            double dy = points[i].y - points[j].y;
            by_distance.emplace_back(dx * dx + dy * dy, j);
        }
        std::sort(by_distance.begin(), by_distance.end());
        for (int t = 0; t < k; ++t) {
            int j = by_distance[t].second;
            edges.insert({std::min(i, j), std::max(i, j)});
        }
    }
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

std::vector<ObjectRecord> records_from_views(const std::vector<SceneObjectView>& views) {
    std::vector<VisualDescriptor> descriptors;
    descriptors.reserve(views.size());
    for (const auto& v : views) descriptors.push_back({v.color, v.dimension, v.shape});
    auto names = assign_names(descriptors);

    std::vector<ObjectRecord> records;
    records.reserve(views.size());
    for (std::size_t i = 0; i < views.size(); ++i) {
        ObjectRecord r;
        r.index = static_cast<int>(i);
        r.name = names[i];
        r.color = views[i].color;
        r.dimension = views[i].dimension;
        r.shape = views[i].shape;
        records.push_back(std::move(r));
    }
    return records;
}

DetectionResult detect_objects(const SceneSpec& scene, PerceptionAdapter& adapter,
                               std::uint64_t seed) {
    DetectionResult result = adapter.detect(scene, seed);
    if (result.records.size() != result.centroids.size())
        throw Error("detector returned mismatched record/centroid counts");
    if (result.missing_count < 0 || result.hallucinated_count < 0)
        throw Error("detector returned negative noise counts");
    std::set<std::string> names;
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        const auto& r = result.records[i];
        if (r.index != static_cast<int>(i)) throw Error("detector records not densely indexed");
        if (!is_valid_object_name(r.name)) throw Error("detector produced bad name " + r.name);
        if (!names.insert(r.name).second) throw Error("detector produced duplicate name " + r.name);
    }
    return result;
}

std::vector<std::pair<int, int>> cross_view_match(const std::vector<SceneObjectView>& top,
                                                  const std::vector<SceneObjectView>& side) {
    if (top.size() != side.size())
        throw CardinalityMismatch("top view has " + std::to_string(top.size()) +
                                  " objects, side view has " + std::to_string(side.size()));

    std::vector<std::pair<int, int>> pairs;
    std::vector<bool> side_used(side.size(), false);
    std::vector<bool> top_used(top.size(), false);
    for (std::size_t i = 0; i < top.size(); ++i) {
        for (std::size_t j = 0; j < side.size(); ++j) {
            if (!side_used[j] && side[j].id == top[i].id) {
                pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
                side_used[j] = true;
                top_used[i] = true;
                break;
            }
        }
    }
    // Leftovers (ids present in only one view) are matched positionally so the
    // correspondence stays total.
    std::size_t j = 0;
    for (std::size_t i = 0; i < top.size(); ++i) {
        if (top_used[i]) continue;
        while (j < side.size() && side_used[j]) ++j;
        pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
        side_used[j] = true;
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

}  // namespace probepack
