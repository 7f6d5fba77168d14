#include "probepack/core.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "probepack/rng.hpp"

namespace probepack {

const std::vector<Property>& all_properties() {
    static const std::vector<Property> v = {Property::rigid, Property::bendable, Property::foldable,
                                            Property::compressible, Property::plastic};
    return v;
}

const std::vector<Shape>& all_shapes() {
    static const std::vector<Shape> v = {
        Shape::line,
        Shape::circle, Shape::rectangle, Shape::triangle, Shape::polygon, Shape::loop,
        Shape::sphere, Shape::cube, Shape::cuboid, Shape::pyramid, Shape::cylinder,
        Shape::cone, Shape::polyhedron};
    return v;
}

std::string to_string(Property p) {
    switch (p) {
        case Property::rigid: return "rigid";
        case Property::bendable: return "bendable";
        case Property::foldable: return "foldable";
        case Property::compressible: return "compressible";
        case Property::plastic: return "plastic";
    }
    return "?";
}

std::string to_string(Dimension d) {
    switch (d) {
        case Dimension::d1: return "1D";
        case Dimension::d2: return "2D";
        case Dimension::d3: return "3D";
    }
    return "?";
}

std::string to_string(Shape s) {
    switch (s) {
        case Shape::line: return "line";
        case Shape::circle: return "circle";
        case Shape::rectangle: return "rectangle";
        case Shape::triangle: return "triangle";
        case Shape::polygon: return "polygon";
        case Shape::loop: return "loop";
        case Shape::sphere: return "sphere";
        case Shape::cube: return "cube";
        case Shape::cuboid: return "cuboid";
        case Shape::pyramid: return "pyramid";
        case Shape::cylinder: return "cylinder";
        case Shape::cone: return "cone";
        case Shape::polyhedron: return "polyhedron";
    }
    return "?";
}

std::optional<Property> parse_property(const std::string& s) {
    for (Property p : all_properties()) {
        if (to_string(p) == s) return p;
    }
    return std::nullopt;
}

std::optional<Dimension> parse_dimension(const std::string& s) {
    if (s == "1D") return Dimension::d1;
    if (s == "2D") return Dimension::d2;
    if (s == "3D") return Dimension::d3;
    return std::nullopt;
}

std::optional<Shape> parse_shape(const std::string& s) {
    for (Shape sh : all_shapes()) {
        if (to_string(sh) == s) return sh;
    }
    return std::nullopt;
}

std::string property_predicate(Property p) { return "is_" + to_string(p); }

Dimension shape_dimension(Shape s) {
    switch (s) {
        case Shape::line:
            return Dimension::d1;
        case Shape::circle:
        case Shape::rectangle:
        case Shape::triangle:
        case Shape::polygon:
        case Shape::loop:
            return Dimension::d2;
        default:
            return Dimension::d3;
    }
}

std::string ObjectName::str() const {
    std::string out = color + "_" + to_string(dimension) + "_" + to_string(shape);
    if (ordinal >= 2) out += "_" + std::to_string(ordinal);
    return out;
}

namespace {

bool lowercase_alpha(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return c >= 'a' && c <= 'z'; });
}

std::vector<std::string> split_underscore(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == '_') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

ObjectName parse_object_name(const std::string& text) {
    auto parts = split_underscore(text);
    if (parts.size() != 3 && parts.size() != 4)
        throw MalformedName("expected color_dimension_shape[_ordinal]: \"" + text + "\"");

    ObjectName n;
    n.color = parts[0];
    if (!lowercase_alpha(n.color))
        throw MalformedName("bad color token in \"" + text + "\"");

    auto dim = parse_dimension(parts[1]);
    if (!dim) throw MalformedName("bad dimension token in \"" + text + "\"");
    n.dimension = *dim;

    auto shape = parse_shape(parts[2]);
    if (!shape) throw MalformedName("unknown shape in \"" + text + "\"");
    n.shape = *shape;

    if (shape_dimension(n.shape) != n.dimension)
        throw MalformedName("shape/dimension mismatch in \"" + text + "\"");

    if (parts.size() == 4) {
        const std::string& ord = parts[3];
        bool digits = !ord.empty() &&
                      std::all_of(ord.begin(), ord.end(), [](unsigned char c) { return c >= '0' && c <= '9'; });
        if (!digits || ord[0] == '0' || ord.size() > 6)
            throw MalformedName("bad ordinal in \"" + text + "\"");
        n.ordinal = std::stoi(ord);
        if (n.ordinal < 2) throw MalformedName("ordinal must be >= 2 in \"" + text + "\"");
    }
    return n;
}

bool is_valid_object_name(const std::string& text) {
    try {
        parse_object_name(text);
        return true;
    } catch (const MalformedName&) {
        return false;
    }
}

std::vector<std::string> assign_names(const std::vector<VisualDescriptor>& descriptors) {
    std::map<std::string, int> seen;
    std::vector<std::string> names;
    names.reserve(descriptors.size());
    for (const auto& d : descriptors) {
        std::string base = d.color + "_" + to_string(d.dimension) + "_" + to_string(d.shape);
        int count = ++seen[base];
        names.push_back(count == 1 ? base : base + "_" + std::to_string(count));
    }
    return names;
}

bool BoxRecord::contains(int object_index) const {
    return std::find(members.begin(), members.end(), object_index) != members.end();
}

const ObjectRecord& WorldState::object(int index) const {
    if (index < 0 || index >= static_cast<int>(objects.size()))
        throw Error("object index out of range: " + std::to_string(index));
    return objects[static_cast<std::size_t>(index)];
}

ObjectRecord& WorldState::object(int index) {
    if (index < 0 || index >= static_cast<int>(objects.size()))
        throw Error("object index out of range: " + std::to_string(index));
    return objects[static_cast<std::size_t>(index)];
}

std::optional<int> WorldState::find_object(const std::string& name) const {
    for (const auto& o : objects) {
        if (o.name == name) return o.index;
    }
    return std::nullopt;
}

WorldState make_initial_state(std::vector<ObjectRecord> objects) {
    WorldState s;
    s.objects = std::move(objects);
    for (std::size_t i = 0; i < s.objects.size(); ++i) s.objects[i].index = static_cast<int>(i);
    s.box = BoxRecord{};
    s.hand_empty = true;
    s.holding = std::nullopt;
    return s;
}

void validate_world(const WorldState& s) {
    std::set<std::string> names;
    for (std::size_t i = 0; i < s.objects.size(); ++i) {
        const auto& o = s.objects[i];
        if (o.index != static_cast<int>(i))
            throw Error("object index " + std::to_string(o.index) + " at slot " + std::to_string(i));
        if (!names.insert(o.name).second) throw Error("duplicate object name " + o.name);
    }
    std::set<int> members;
    for (int m : s.box.members) {
        if (m < 0 || m >= static_cast<int>(s.objects.size()))
            throw Error("box member out of range: " + std::to_string(m));
        if (!members.insert(m).second) throw Error("duplicate box member " + std::to_string(m));
    }
    if (s.hand_empty != !s.holding.has_value()) throw Error("hand_empty inconsistent with holding");
    if (s.holding) {
        if (*s.holding < 0 || *s.holding >= static_cast<int>(s.objects.size()))
            throw Error("holding index out of range");
        if (s.object(*s.holding).in_bin) throw Error("held object marked in_bin");
    }
}

void validate_world_strict(const WorldState& s) {
    validate_world(s);
    for (const auto& o : s.objects) {
        if (o.in_bin != s.box.contains(o.index))
            throw Error("in_bin/membership mismatch for " + o.name);
    }
}

std::uint64_t fingerprint(const WorldState& s) {
    std::ostringstream os;
    for (const auto& o : s.objects) {
        os << o.name << '|' << (o.property ? to_string(*o.property) : "?") << '|' << o.in_bin
           << o.is_bent << o.is_folded << o.is_pushed << ';';
    }
    std::vector<int> members = s.box.members;
    std::sort(members.begin(), members.end());
    os << "box:";
    for (int m : members) os << m << ',';
    os << "|hand:" << s.hand_empty << "|hold:" << (s.holding ? *s.holding : -1);
    return fnv1a64(os.str());
}

KnowledgeBase::KnowledgeBase(const KnowledgeBase& other) {
    std::shared_lock lock(other.mutex_);
    entries_ = other.entries_;
    version_ = other.version_;
}

KnowledgeBase& KnowledgeBase::operator=(const KnowledgeBase& other) {
    if (this == &other) return *this;
    auto [entries, version] = [&] {
        std::shared_lock lock(other.mutex_);
        return std::pair(other.entries_, other.version_);
    }();
    std::unique_lock lock(mutex_);
    entries_ = std::move(entries);
    version_ = version;
    return *this;
}

void KnowledgeBase::insert(const std::string& name, Property p) {
    std::unique_lock lock(mutex_);
    auto it = entries_.find(name);
    if (it != entries_.end() && it->second != p)
        throw PropertyConflict(name + " already recorded as " + to_string(it->second) +
                               ", refusing " + to_string(p));
    entries_[name] = p;
    ++version_;
}

std::optional<Property> KnowledgeBase::lookup(const std::string& name) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(name);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::map<std::string, Property> KnowledgeBase::snapshot() const {
    std::shared_lock lock(mutex_);
    return entries_;
}

std::uint64_t KnowledgeBase::version() const {
    std::shared_lock lock(mutex_);
    return version_;
}

std::size_t KnowledgeBase::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

std::string KnowledgeBase::to_json_text() const {
    auto [entries, version] = [&] {
        std::shared_lock lock(mutex_);
        return std::pair(entries_, version_);
    }();
    nlohmann::json j;
    j["version"] = version;
    j["entries"] = nlohmann::json::object();
    for (const auto& [name, prop] : entries) j["entries"][name] = to_string(prop);
    return j.dump(2) + "\n";
}

KnowledgeBase KnowledgeBase::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FileError(std::string("bad knowledge base json: ") + e.what());
    }
    KnowledgeBase kb;
    if (!j.is_object() || !j.contains("entries") || !j["entries"].is_object())
        throw FileError("knowledge base json missing entries object");
    for (auto it = j["entries"].begin(); it != j["entries"].end(); ++it) {
        auto p = parse_property(it.value().get<std::string>());
        if (!p) throw FileError("unknown property \"" + it.value().get<std::string>() + "\" in knowledge base");
        kb.entries_[it.key()] = *p;
    }
    kb.version_ = j.value("version", static_cast<std::uint64_t>(kb.entries_.size()));
    return kb;
}

void KnowledgeBase::save(const std::string& path) const { write_text_file(path, to_json_text()); }

KnowledgeBase KnowledgeBase::load(const std::string& path) {
    return from_json_text(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write " + path);
    out << content;
    if (!out) throw FileError("short write to " + path);
}

}  // namespace probepack
