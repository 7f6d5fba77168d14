#include <doctest.h>

#include "oracles.hpp"
#include "probepack/adapters.hpp"
#include "probepack/perception.hpp"
#include "probepack/rng.hpp"
#include "probepack/vocabulary.hpp"

using namespace probepack;

#ifndef PROBEPACK_FIXTURE_DIR
#define PROBEPACK_FIXTURE_DIR "fixtures"
#endif

namespace {

std::vector<Point2> random_points(Rng& rng, std::size_t n) {
    std::vector<Point2> pts;
    while (pts.size() < n) {
        Point2 p{rng.uniform() * 100.0, rng.uniform() * 100.0};
        bool dup = false;
        for (const auto& q : pts) dup = dup || (q == p);
        if (!dup) pts.push_back(p);
    }
    return pts;
}

}  // namespace

TEST_CASE("detection graph matches the brute force oracle") {
    Rng rng(fnv1a64("knn-oracle"));
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 8u, 12u}) {
        for (int rep = 0; rep < 20; ++rep) {
            auto pts = random_points(rng, n);
            std::vector<std::pair<double, double>> raw;
            for (const auto& p : pts) raw.push_back({p.x, p.y});

            DetectionGraph g = build_detection_graph(pts);
            auto expected = oracles::knn_edges(raw);
            CHECK(g.vertex_count == static_cast<int>(n));
            std::set<std::pair<int, int>> got(g.edges.begin(), g.edges.end());
            CHECK(got == expected);
            CHECK(g.edges.size() == got.size());  // no duplicate edges
            CHECK(std::is_sorted(g.edges.begin(), g.edges.end()));
        }
    }
}

TEST_CASE("graph edges are invariant under point relabeling") {
    Rng rng(fnv1a64("knn-permute"));
    auto pts = random_points(rng, 9);
    DetectionGraph base = build_detection_graph(pts);

    // rotate labels by three
    std::vector<Point2> rotated;
    const std::size_t shift = 3;
    for (std::size_t i = 0; i < pts.size(); ++i) rotated.push_back(pts[(i + shift) % pts.size()]);
    DetectionGraph moved = build_detection_graph(rotated);

    // rotated[v] = pts[(v + shift) % n], so label v maps back to (v + shift) % n
    auto relabel = [&](int v) {
        return static_cast<int>((static_cast<std::size_t>(v) + shift) % pts.size());
    };
    std::set<std::pair<int, int>> mapped;
    for (auto [a, b] : moved.edges) {
        int ra = relabel(a), rb = relabel(b);
        mapped.insert({std::min(ra, rb), std::max(ra, rb)});
    }
    std::set<std::pair<int, int>> expected(base.edges.begin(), base.edges.end());
    CHECK(mapped == expected);
}

TEST_CASE("distance ties agree with the oracle on a grid") {
    // integer grids are full of exact distance ties, so any tie-break drift
    // from the (distance, index) order shows up immediately
    std::vector<Point2> grid;
    std::vector<std::pair<double, double>> raw;
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
            grid.push_back({static_cast<double>(x), static_cast<double>(y)});
            raw.push_back({static_cast<double>(x), static_cast<double>(y)});
        }
    }
    DetectionGraph g = build_detection_graph(grid);
    std::set<std::pair<int, int>> got(g.edges.begin(), g.edges.end());
    CHECK(got == oracles::knn_edges(raw));

    std::vector<Point2> square = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    DetectionGraph s = build_detection_graph(square);
    CHECK(s.has_edge(0, 3));
    CHECK(s.has_edge(3, 0));
    CHECK_FALSE(s.has_edge(0, 0));

    std::vector<Point2> three = {{0, 0}, {2, 0}, {1, std::sqrt(3.0)}};  // equilateral
    CHECK(build_detection_graph(three).edges.size() == 3);  // k = 2, all pairwise
}

TEST_CASE("coincident points are rejected") {
    std::vector<Point2> pts = {{1, 1}, {2, 2}, {1, 1}};
    CHECK_THROWS_AS(build_detection_graph(pts), DuplicatePoint);
}

TEST_CASE("cross view matching prefers ids and falls back to position") {
    SceneSpec scene = scene_for_names({"red_3D_cuboid", "white_3D_cuboid", "green_3D_cylinder"});
    auto pairs = cross_view_match(scene.top, scene.side);
    CHECK(pairs == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}});

    SUBCASE("shuffled side view still pairs by id") {
        std::swap(scene.side[0], scene.side[2]);
        auto shuffled = cross_view_match(scene.top, scene.side);
        CHECK(shuffled == std::vector<std::pair<int, int>>{{0, 2}, {1, 1}, {2, 0}});
    }
    SUBCASE("unknown ids pair positionally") {
        scene.side[1].id = "mystery_a";
        scene.top[1].id = "mystery_b";
        auto pairs2 = cross_view_match(scene.top, scene.side);
        CHECK(pairs2.size() == 3);
        CHECK(std::find(pairs2.begin(), pairs2.end(), std::make_pair(1, 1)) != pairs2.end());
    }
    SUBCASE("size mismatch throws") {
        scene.side.pop_back();
        CHECK_THROWS_AS(cross_view_match(scene.top, scene.side), CardinalityMismatch);
    }
}

TEST_CASE("scene json round trips through the fixture") {
    const std::string path = std::string(PROBEPACK_FIXTURE_DIR) + "/scenes/objects14.json";
    SceneSpec loaded = load_scene(path);
    std::vector<std::string> all14;
    for (const auto& e : vocabulary14()) all14.push_back(e.name);
    SceneSpec built = scene_for_names(all14, false);
    CHECK(loaded.top == built.top);
    CHECK(loaded.side == built.side);
    CHECK(loaded.ground_truth == built.ground_truth);
    CHECK(scene_to_json_text(loaded) == read_text_file(path));
}

TEST_CASE("oracle detection names look alikes deterministically") {
    const std::string path = std::string(PROBEPACK_FIXTURE_DIR) + "/scenes/similar5.json";
    SceneSpec scene = load_scene(path);
    OraclePerception oracle;
    DetectionResult result = detect_objects(scene, oracle, 7);
    REQUIRE(result.records.size() == 5);
    CHECK(result.full_success());
    CHECK(result.records[0].name == "white_3D_cylinder");
    CHECK(result.records[1].name == "white_3D_cylinder_2");
    CHECK(result.records[2].name == "white_3D_cylinder_3");
    CHECK(result.records[3].name == "yellow_2D_rectangle");
    CHECK(result.records[4].name == "yellow_2D_rectangle_2");
    // appearance alone cannot separate them: the scene must carry the labels
    CHECK(scene.ground_truth.at("white_3D_cylinder") != scene.ground_truth.at("white_3D_cylinder_2"));
}

TEST_CASE("records from views keep view order") {
    SceneSpec scene = similar5_scene();
    auto records = records_from_views(scene.top);
    REQUIRE(records.size() == 5);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].index == static_cast<int>(i));
        CHECK(records[i].name == scene.top[i].id);
        CHECK_FALSE(records[i].property.has_value());
    }
}
