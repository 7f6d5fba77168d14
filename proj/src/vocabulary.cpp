#include "probepack/vocabulary.hpp"

#include <algorithm>

#include <json.hpp>

namespace probepack {

const std::vector<VocabEntry>& vocabulary14() {
    // robot_accuracy / robot_tree_accuracy are the measured per-object success
    // rates of the probe-interaction classifier presets.
    static const std::vector<VocabEntry> v = {
        {"red_3D_cuboid", 1, Property::plastic, 1.00, 1.00},
        {"white_3D_cuboid", 2, Property::rigid, 0.00, 0.00},
        {"yellow_3D_cuboid", 3, Property::compressible, 1.00, 1.00},
        {"green_3D_cylinder", 4, Property::rigid, 1.00, 1.00},
        {"white_3D_cylinder", 5, Property::compressible, 1.00, 1.00},
        {"blue_2D_rectangle", 6, Property::plastic, 0.00, 0.40},
        {"yellow_2D_rectangle", 7, Property::foldable, 1.00, 1.00},
        {"transparent_2D_circle", 8, Property::foldable, 1.00, 1.00},
        {"beige_1D_line", 9, Property::rigid, 0.00, 0.00},
        {"black_1D_line", 10, Property::bendable, 1.00, 1.00},
        {"gray_1D_line", 11, Property::plastic, 1.00, 0.40},
        {"brown_3D_cylinder", 12, Property::compressible, 1.00, 0.90},
        {"red_3D_polyhedron", 13, Property::compressible, 1.00, 0.60},
        {"blue_3D_cylinder", 14, Property::rigid, 1.00, 1.00},
    };
    return v;
}

const std::vector<VocabEntry>& vocabulary14_alt() {
    // The corpus never pins down which of the two remaining 1D lines is the
    // rigid one and which the plastic one; this variant swaps the default
    // beige/gray guess (identity swaps with them: index and accuracies follow
    // the physical object, not the name).
    static const std::vector<VocabEntry> v = [] {
        std::vector<VocabEntry> out = vocabulary14();
        VocabEntry* beige = nullptr;
        VocabEntry* gray = nullptr;
        for (auto& e : out) {
            if (e.name == "beige_1D_line") beige = &e;
            if (e.name == "gray_1D_line") gray = &e;
        }
        std::swap(beige->table_index, gray->table_index);
        std::swap(beige->property, gray->property);
        std::swap(beige->robot_accuracy, gray->robot_accuracy);
        std::swap(beige->robot_tree_accuracy, gray->robot_tree_accuracy);
        return out;
    }();
    return v;
}

const VocabEntry* find_vocab_entry(const std::string& name, bool alt) {
    const auto& vocab = alt ? vocabulary14_alt() : vocabulary14();
    for (const auto& e : vocab) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

std::map<std::string, Property> vocabulary_truth(bool alt) {
    std::map<std::string, Property> truth;
    for (const auto& e : (alt ? vocabulary14_alt() : vocabulary14())) truth[e.name] = e.property;
    return truth;
}

const std::vector<std::vector<std::string>>& corpus38() {
    static const std::vector<std::vector<std::string>> corpus = {
        {"red_3D_cuboid", "white_3D_cuboid", "green_3D_cylinder"},
        {"red_3D_cuboid", "white_3D_cuboid", "black_1D_line", "red_3D_polyhedron",
         "brown_3D_cylinder"},
        {"red_3D_cuboid", "white_3D_cylinder", "blue_2D_rectangle", "black_1D_line"},
        {"red_3D_cuboid", "yellow_3D_cuboid", "blue_3D_cylinder", "yellow_2D_rectangle",
         "brown_3D_cylinder"},
        {"red_3D_cuboid", "yellow_3D_cuboid", "blue_3D_cylinder", "beige_1D_line",
         "red_3D_polyhedron"},
        {"red_3D_cuboid", "yellow_3D_cuboid", "white_3D_cylinder", "yellow_2D_rectangle",
         "gray_1D_line"},
        {"red_3D_cuboid", "yellow_3D_cuboid", "blue_2D_rectangle", "brown_3D_cylinder"},
        {"red_3D_cuboid", "blue_3D_cylinder", "white_3D_cylinder", "blue_2D_rectangle",
         "yellow_2D_rectangle", "gray_1D_line", "brown_3D_cylinder"},
        {"red_3D_cuboid", "blue_3D_cylinder", "transparent_2D_circle", "black_1D_line"},
        {"red_3D_cuboid", "blue_3D_cylinder", "beige_1D_line", "brown_3D_cylinder",
         "green_3D_cylinder"},
        {"red_3D_cuboid", "blue_3D_cylinder", "red_3D_polyhedron", "brown_3D_cylinder"},
        {"red_3D_cuboid", "white_3D_cylinder", "transparent_2D_circle", "beige_1D_line",
         "red_3D_polyhedron", "green_3D_cylinder"},
        {"red_3D_cuboid", "blue_2D_rectangle", "yellow_2D_rectangle", "brown_3D_cylinder",
         "green_3D_cylinder"},
        {"white_3D_cuboid", "yellow_3D_cuboid", "blue_3D_cylinder", "blue_2D_rectangle",
         "beige_1D_line"},
        {"white_3D_cuboid", "yellow_3D_cuboid", "white_3D_cylinder", "blue_2D_rectangle",
         "black_1D_line", "brown_3D_cylinder"},
        {"white_3D_cuboid", "yellow_3D_cuboid", "white_3D_cylinder", "yellow_2D_rectangle",
         "brown_3D_cylinder"},
        {"white_3D_cuboid", "blue_3D_cylinder", "white_3D_cylinder", "beige_1D_line",
         "gray_1D_line"},
        {"white_3D_cuboid", "blue_3D_cylinder", "blue_2D_rectangle", "gray_1D_line"},
        {"white_3D_cuboid", "white_3D_cylinder", "transparent_2D_circle", "gray_1D_line",
         "green_3D_cylinder"},
        {"white_3D_cuboid", "white_3D_cylinder", "beige_1D_line", "red_3D_polyhedron",
         "brown_3D_cylinder"},
        {"white_3D_cuboid", "blue_2D_rectangle", "yellow_2D_rectangle", "transparent_2D_circle",
         "brown_3D_cylinder"},
        {"white_3D_cuboid", "gray_1D_line", "red_3D_polyhedron", "green_3D_cylinder"},
        {"yellow_3D_cuboid", "blue_3D_cylinder", "white_3D_cylinder", "yellow_2D_rectangle",
         "red_3D_polyhedron"},
        {"yellow_3D_cuboid", "blue_3D_cylinder", "blue_2D_rectangle", "transparent_2D_circle",
         "red_3D_polyhedron", "green_3D_cylinder"},
        {"yellow_3D_cuboid", "blue_3D_cylinder", "black_1D_line", "green_3D_cylinder"},
        {"yellow_3D_cuboid", "white_3D_cylinder", "transparent_2D_circle", "gray_1D_line",
         "brown_3D_cylinder"},
        {"yellow_3D_cuboid", "white_3D_cylinder", "beige_1D_line", "brown_3D_cylinder",
         "green_3D_cylinder"},
        {"yellow_3D_cuboid", "blue_2D_rectangle", "black_1D_line", "red_3D_polyhedron",
         "green_3D_cylinder"},
        {"yellow_3D_cuboid", "yellow_2D_rectangle", "transparent_2D_circle", "red_3D_polyhedron",
         "brown_3D_cylinder"},
        {"blue_3D_cylinder", "white_3D_cylinder", "transparent_2D_circle", "black_1D_line",
         "red_3D_polyhedron", "green_3D_cylinder"},
        {"blue_3D_cylinder", "blue_2D_rectangle", "black_1D_line", "gray_1D_line",
         "green_3D_cylinder"},
        {"white_3D_cylinder", "blue_2D_rectangle", "yellow_2D_rectangle", "transparent_2D_circle",
         "red_3D_polyhedron", "brown_3D_cylinder"},
        {"white_3D_cylinder", "beige_1D_line", "gray_1D_line"},
        {"white_3D_cylinder", "black_1D_line", "red_3D_polyhedron"},
        {"blue_2D_rectangle", "transparent_2D_circle", "beige_1D_line", "black_1D_line",
         "brown_3D_cylinder", "green_3D_cylinder"},
        {"yellow_2D_rectangle", "beige_1D_line", "black_1D_line", "gray_1D_line"},
        {"transparent_2D_circle", "beige_1D_line", "black_1D_line", "gray_1D_line",
         "red_3D_polyhedron", "brown_3D_cylinder"},
        {"transparent_2D_circle", "black_1D_line", "red_3D_polyhedron", "green_3D_cylinder"},
    };
    return corpus;
}

std::string corpus_to_json_text(const std::vector<std::vector<std::string>>& corpus) {
    nlohmann::json j;
    j["instances"] = nlohmann::json::array();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        j["instances"].push_back({{"id", i + 1}, {"objects", corpus[i]}});
    }
    return j.dump(2) + "\n";
}

std::vector<std::vector<std::string>> corpus_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FileError(std::string("bad corpus json: ") + e.what());
    }
    std::vector<std::vector<std::string>> corpus;
    try {
        for (const auto& inst : j.at("instances")) {
            corpus.push_back(inst.at("objects").get<std::vector<std::string>>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw FileError(std::string("bad corpus json: ") + e.what());
    }
    return corpus;
}

std::vector<ObjectRecord> records_for_names(const std::vector<std::string>& names) {
    std::vector<ObjectRecord> records;
    records.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        ObjectName parsed = parse_object_name(names[i]);
        ObjectRecord r;
        r.index = static_cast<int>(i);
        r.name = names[i];
        r.color = parsed.color;
        r.dimension = parsed.dimension;
        r.shape = parsed.shape;
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<ObjectRecord> labeled_records_for_names(const std::vector<std::string>& names,
                                                    bool alt) {
    auto records = records_for_names(names);
    for (auto& r : records) {
        const VocabEntry* entry = find_vocab_entry(r.name, alt);
        if (!entry) throw MissingProperty("name outside the bench vocabulary: " + r.name);
        r.property = entry->property;
    }
    return records;
}

std::vector<ObjectRecord> instance15_objects() {
    return labeled_records_for_names(corpus38()[14]);
}

SceneSpec scene_for_names(const std::vector<std::string>& names, bool alt) {
    SceneSpec scene;
    auto truth = vocabulary_truth(alt);
    for (std::size_t i = 0; i < names.size(); ++i) {
        ObjectName parsed = parse_object_name(names[i]);
        SceneObjectView top;
        top.id = names[i];
        // single row: every object keeps a distinct column in both views
        top.centroid = {10.0 * i + 5.0, 5.0};
        top.color = parsed.color;
        top.dimension = parsed.dimension;
        top.shape = parsed.shape;
        SceneObjectView side = top;
        side.centroid = {top.centroid.x, 2.0};
        scene.top.push_back(std::move(top));
        scene.side.push_back(std::move(side));

        auto it = truth.find(names[i]);
        if (it != truth.end()) scene.ground_truth[names[i]] = it->second;
    }
    return scene;
}

SceneSpec similar5_scene() {
    // Three look-alike white cylinders and two look-alike yellow rectangles;
    // appearance alone cannot separate the labels.
    SceneSpec scene;
    struct Item {
        const char* id;
        const char* color;
        Dimension dim;
        Shape shape;
        Property property;
    };
    const std::vector<Item> items = {
        {"white_3D_cylinder", "white", Dimension::d3, Shape::cylinder, Property::compressible},
        {"white_3D_cylinder_2", "white", Dimension::d3, Shape::cylinder, Property::rigid},
        {"white_3D_cylinder_3", "white", Dimension::d3, Shape::cylinder, Property::plastic},
        {"yellow_2D_rectangle", "yellow", Dimension::d2, Shape::rectangle, Property::foldable},
        {"yellow_2D_rectangle_2", "yellow", Dimension::d2, Shape::rectangle, Property::plastic},
    };
    for (std::size_t i = 0; i < items.size(); ++i) {
        SceneObjectView top;
        top.id = items[i].id;
        top.centroid = {12.0 * i + 6.0, 8.0};
        top.color = items[i].color;
        top.dimension = items[i].dim;
        top.shape = items[i].shape;
        SceneObjectView side = top;
        side.centroid = {top.centroid.x, 2.0};
        scene.top.push_back(std::move(top));
        scene.side.push_back(std::move(side));
        scene.ground_truth[items[i].id] = items[i].property;
    }
    return scene;
}

}  // namespace probepack
