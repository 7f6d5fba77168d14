#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "probepack/core.hpp"

namespace probepack {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point2&) const = default;
};

// One object as seen in a single camera view.
struct SceneObjectView {
    std::string id;  // stable across views of the same scene
    Point2 centroid;
    std::string color;
    Dimension dimension = Dimension::d3;
    Shape shape = Shape::cuboid;

    bool operator==(const SceneObjectView&) const = default;
};

// Two calibrated views plus the hidden property labels used by probing.
struct SceneSpec {
    std::vector<SceneObjectView> top;
    std::vector<SceneObjectView> side;
    std::map<std::string, Property> ground_truth;  // keyed by view id
};

SceneSpec scene_from_json_text(const std::string& text);
std::string scene_to_json_text(const SceneSpec& scene);
SceneSpec load_scene(const std::string& path);
void save_scene(const SceneSpec& scene, const std::string& path);

// Undirected k-nearest-neighbour graph over detection centroids: every vertex
// links to its min(3, n-1) nearest neighbours, Euclidean distance, ties broken
// toward the lower index. Edges are deduplicated (a, b) with a < b.
struct DetectionGraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;  // sorted lexicographically

    bool has_edge(int a, int b) const;
};

// Throws DuplicatePoint when two points coincide exactly.
DetectionGraph build_detection_graph(const std::vector<Point2>& points);

struct DetectionResult {
    std::vector<ObjectRecord> records;       // named, indices 0..n-1
    std::vector<Point2> centroids;           // parallel to records
    int missing_count = 0;
    int hallucinated_count = 0;

    bool full_success() const { return missing_count == 0 && hallucinated_count == 0; }
};

class PerceptionAdapter {
public:
    virtual ~PerceptionAdapter() = default;
    virtual DetectionResult detect(const SceneSpec& scene, std::uint64_t seed) = 0;
};

// Runs the adapter and checks the structural guarantees every detector must
// uphold (unique names, consistent counts, grammar-valid names).
DetectionResult detect_objects(const SceneSpec& scene, PerceptionAdapter& adapter,
                               std::uint64_t seed);

// Pairs top-view entries with side-view entries of the same scene id. Entries
// whose id is missing from the other view (a noisy detector can do that) are
// paired off positionally after all id matches. Throws CardinalityMismatch if
// the two views disagree in size.
std::vector<std::pair<int, int>> cross_view_match(const std::vector<SceneObjectView>& top,
                                                  const std::vector<SceneObjectView>& side);

// Records in top-view order with names assigned by first occurrence.
std::vector<ObjectRecord> records_from_views(const std::vector<SceneObjectView>& views);

}  // namespace probepack
