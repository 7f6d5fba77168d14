#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "probepack/errors.hpp"

namespace probepack {

enum class Property { rigid, bendable, foldable, compressible, plastic };

enum class Dimension { d1 = 1, d2 = 2, d3 = 3 };

enum class Shape {
    line,                                            // 1D
    circle, rectangle, triangle, polygon, loop,      // 2D
    sphere, cube, cuboid, pyramid, cylinder, cone, polyhedron  // 3D
};

const std::vector<Property>& all_properties();
const std::vector<Shape>& all_shapes();

std::string to_string(Property p);
std::string to_string(Dimension d);   // "1D" / "2D" / "3D"
std::string to_string(Shape s);

std::optional<Property> parse_property(const std::string& s);
std::optional<Dimension> parse_dimension(const std::string& s);
std::optional<Shape> parse_shape(const std::string& s);

// "is_rigid", "is_bendable", ...
std::string property_predicate(Property p);

Dimension shape_dimension(Shape s);

// Structured form of an object name: color_dimension_shape[_ordinal].
// ordinal is 1 when the name has no suffix; suffixes start at 2.
struct ObjectName {
    std::string color;
    Dimension dimension = Dimension::d3;
    Shape shape = Shape::cuboid;
    int ordinal = 1;

    std::string str() const;
    bool operator==(const ObjectName&) const = default;
};

// Throws MalformedName on bad tokens, unknown shapes, a dimension token that
// contradicts the shape, or an ordinal below 2.
ObjectName parse_object_name(const std::string& text);

bool is_valid_object_name(const std::string& text);

// Visual description of one object, before any identity is assigned.
struct VisualDescriptor {
    std::string color;
    Dimension dimension = Dimension::d3;
    Shape shape = Shape::cuboid;

    bool operator==(const VisualDescriptor&) const = default;
};

// Deterministic naming: first occurrence of a (color, dimension, shape) keeps
// the bare name, repeats get _2, _3, ... in input order.
std::vector<std::string> assign_names(const std::vector<VisualDescriptor>& descriptors);

struct ObjectRecord {
    int index = 0;
    std::string name;
    std::string color;
    Dimension dimension = Dimension::d3;
    Shape shape = Shape::cuboid;
    std::optional<Property> property;
    bool in_bin = false;
    bool is_bent = false;
    bool is_folded = false;
    bool is_pushed = false;

    bool operator==(const ObjectRecord&) const = default;
};

struct BoxRecord {
    int index = 0;
    std::vector<int> members;  // object indices in placement order

    bool contains(int object_index) const;
    bool operator==(const BoxRecord&) const = default;
};

struct WorldState {
    std::vector<ObjectRecord> objects;
    BoxRecord box;
    bool hand_empty = true;
    std::optional<int> holding;

    const ObjectRecord& object(int index) const;
    ObjectRecord& object(int index);
    std::optional<int> find_object(const std::string& name) const;

    bool operator==(const WorldState&) const = default;
};

WorldState make_initial_state(std::vector<ObjectRecord> objects);

// Structural sanity: contiguous indices, valid holding/member references,
// hand_empty consistent with holding, no duplicate members or names.
// Throws Error with a description of the first violation.
void validate_world(const WorldState& s);

// Adds the box-membership/in_bin equivalence on top of validate_world. Holds
// for every state the canonical action set can reach; deliberately broken
// domains violate it mid-run.
void validate_world_strict(const WorldState& s);

// Order-insensitive content hash of the state (box membership is compared as a
// set; placement order still matters for goal text, not for identity here).
std::uint64_t fingerprint(const WorldState& s);

// Name -> property store shared between probing and planning. insert is
// first-writer-wins: a second insert with the same value is accepted (and still
// bumps the version so pollers see the write), a different value throws
// PropertyConflict.
class KnowledgeBase {
public:
    KnowledgeBase() = default;
    KnowledgeBase(const KnowledgeBase& other);
    KnowledgeBase& operator=(const KnowledgeBase& other);

    void insert(const std::string& name, Property p);
    std::optional<Property> lookup(const std::string& name) const;
    std::map<std::string, Property> snapshot() const;
    std::uint64_t version() const;
    std::size_t size() const;

    std::string to_json_text() const;
    static KnowledgeBase from_json_text(const std::string& text);

    void save(const std::string& path) const;
    static KnowledgeBase load(const std::string& path);

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, Property> entries_;
    std::uint64_t version_ = 0;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace probepack
