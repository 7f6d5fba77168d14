#pragma once

#include <map>
#include <string>
#include <vector>

#include "probepack/core.hpp"
#include "probepack/perception.hpp"

namespace probepack {

// The 14 bench objects every packing instance draws from. table_index is the
// object number used by the probing-accuracy presets. The two 1D lines beige
// and gray carry the one assignment the corpus leaves open: by default beige is
// rigid and gray is plastic; the alternate vocabulary swaps them. Everything
// else is pinned by the instance walkthroughs.
struct VocabEntry {
    std::string name;
    int table_index = 0;
    Property property = Property::rigid;
    double robot_accuracy = 1.0;       // probe-only preset
    double robot_tree_accuracy = 1.0;  // probe plus observation-tree preset
};

const std::vector<VocabEntry>& vocabulary14();
const std::vector<VocabEntry>& vocabulary14_alt();

const VocabEntry* find_vocab_entry(const std::string& name, bool alt = false);

std::map<std::string, Property> vocabulary_truth(bool alt = false);

// The 38 packing instances of the planning corpus, 1-based ids, each a list of
// vocabulary names.
const std::vector<std::vector<std::string>>& corpus38();

std::string corpus_to_json_text(const std::vector<std::vector<std::string>>& corpus);
std::vector<std::vector<std::string>> corpus_from_json_text(const std::string& text);

// Records in list order, without property labels (probing fills those in).
std::vector<ObjectRecord> records_for_names(const std::vector<std::string>& names);

// Records with properties resolved from the vocabulary.
std::vector<ObjectRecord> labeled_records_for_names(const std::vector<std::string>& names,
                                                    bool alt = false);

// The six-object walkthrough instance (corpus id 15) with its known labels.
std::vector<ObjectRecord> instance15_objects();

// Synthetic two-view scenes for the fixtures: a grid layout, side view sharing
// x with a flat height coordinate.
SceneSpec scene_for_names(const std::vector<std::string>& names, bool alt = false);

// Five objects in two look-alike groups (three white cylinders, two yellow
// rectangles) whose hidden properties differ within each group.
SceneSpec similar5_scene();

}  // namespace probepack
