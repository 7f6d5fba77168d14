#include "probepack/domain.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

namespace probepack {

std::string to_string(Verb v) {
    switch (v) {
        case Verb::pick: return "pick";
        case Verb::place: return "place";
        case Verb::bend: return "bend";
        case Verb::fold: return "fold";
        case Verb::push: return "push";
    }
    return "?";
}

std::optional<Verb> parse_verb(const std::string& s) {
    for (Verb v : all_verbs()) {
        if (to_string(v) == s) return v;
    }
    return std::nullopt;
}

const std::vector<Verb>& all_verbs() {
    static const std::vector<Verb> v = {Verb::pick, Verb::place, Verb::bend, Verb::fold,
                                        Verb::push};
    return v;
}

std::string to_string(Rule r) {
    switch (r) {
        case Rule::r1: return "R1";
        case Rule::r2: return "R2";
        case Rule::r3: return "R3";
        case Rule::r4: return "R4";
        case Rule::r5: return "R5";
    }
    return "?";
}

std::string rule_description(Rule r) {
    switch (r) {
        case Rule::r1:
            return "A plastic object may be placed only after a compressible object is already "
                   "in the box; non-plastic objects may be placed at any time.";
        case Rule::r2: return "Push every compressible object after placing it in the box.";
        case Rule::r3: return "Bend every bendable object before placing it in the box.";
        case Rule::r4: return "Fold every foldable object before placing it in the box.";
        case Rule::r5: return "Never bend, fold, or push a plastic object.";
    }
    return "?";
}

bool rule_enabled(const ConstraintSet& c, Rule r) {
    switch (r) {
        case Rule::r1: return c.r1;
        case Rule::r2: return c.r2;
        case Rule::r3: return c.r3;
        case Rule::r4: return c.r4;
        case Rule::r5: return c.r5;
    }
    return false;
}

std::string to_string(Cond c) {
    switch (c) {
        case Cond::hand_empty: return "hand_empty";
        case Cond::holding_target: return "holding_target";
        case Cond::target_in_bin: return "target_in_bin";
        case Cond::target_not_in_bin: return "target_not_in_bin";
        case Cond::target_is_rigid: return "target_is_rigid";
        case Cond::target_is_bendable: return "target_is_bendable";
        case Cond::target_is_foldable: return "target_is_foldable";
        case Cond::target_is_compressible: return "target_is_compressible";
        case Cond::target_is_plastic: return "target_is_plastic";
        case Cond::target_not_plastic: return "target_not_plastic";
    }
    return "?";
}

std::string to_string(Effect e) {
    switch (e) {
        case Effect::set_holding_target: return "set_holding_target";
        case Effect::clear_holding: return "clear_holding";
        case Effect::set_hand_empty: return "set_hand_empty";
        case Effect::clear_hand_empty: return "clear_hand_empty";
        case Effect::set_target_in_bin: return "set_target_in_bin";
        case Effect::add_target_to_box: return "add_target_to_box";
        case Effect::set_target_bent: return "set_target_bent";
        case Effect::set_target_folded: return "set_target_folded";
        case Effect::set_target_pushed: return "set_target_pushed";
    }
    return "?";
}

namespace {

std::optional<Cond> parse_cond(const std::string& s) {
    static const std::vector<Cond> all = {
        Cond::hand_empty,        Cond::holding_target,     Cond::target_in_bin,
        Cond::target_not_in_bin, Cond::target_is_rigid,    Cond::target_is_bendable,
        Cond::target_is_foldable, Cond::target_is_compressible, Cond::target_is_plastic,
        Cond::target_not_plastic};
    for (Cond c : all) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

std::optional<Effect> parse_effect(const std::string& s) {
    static const std::vector<Effect> all = {
        Effect::set_holding_target, Effect::clear_holding,    Effect::set_hand_empty,
        Effect::clear_hand_empty,   Effect::set_target_in_bin, Effect::add_target_to_box,
        Effect::set_target_bent,    Effect::set_target_folded, Effect::set_target_pushed};
    for (Effect e : all) {
        if (to_string(e) == s) return e;
    }
    return std::nullopt;
}

}  // namespace

const ActionSchema& DomainDescription::schema(Verb v) const {
    for (const auto& a : actions) {
        if (a.verb == v) return a;
    }
    throw Error("domain has no schema for " + to_string(v));
}

PredicateSpec generate_predicates(const std::vector<ObjectRecord>& objects) {
    (void)objects;  // the predicate vocabulary is fixed for this task family
    PredicateSpec spec;
    for (Property p : all_properties()) spec.property_predicates.push_back(property_predicate(p));
    spec.state_predicates = {"in_bin", "member", "hand_empty", "holding",
                             "is_bent", "is_folded", "is_pushed"};
    return spec;
}

DomainDescription generate_actions(const ConstraintSet& constraints) {
    DomainDescription d;
    d.constraints = constraints;

    ActionSchema pick;
    pick.verb = Verb::pick;
    pick.preconditions = {Cond::hand_empty, Cond::target_not_in_bin};
    pick.effects = {Effect::clear_hand_empty, Effect::set_holding_target};
    d.actions.push_back(pick);

    ActionSchema place;
    place.verb = Verb::place;
    place.preconditions = {Cond::holding_target};
    place.plastic_requires_compressible_in_box = constraints.r1;
    place.effects = {Effect::set_hand_empty, Effect::clear_holding, Effect::set_target_in_bin,
                     Effect::add_target_to_box};
    d.actions.push_back(place);

    ActionSchema bend;
    bend.verb = Verb::bend;
    bend.preconditions = {Cond::hand_empty, Cond::target_not_in_bin, Cond::target_is_bendable};
    if (constraints.r5) bend.preconditions.push_back(Cond::target_not_plastic);
    bend.effects = {Effect::set_target_bent};
    d.actions.push_back(bend);

    ActionSchema fold;
    fold.verb = Verb::fold;
    fold.preconditions = {Cond::hand_empty, Cond::target_not_in_bin, Cond::target_is_foldable};
    if (constraints.r5) fold.preconditions.push_back(Cond::target_not_plastic);
    fold.effects = {Effect::set_target_folded};
    d.actions.push_back(fold);

    ActionSchema push;
    push.verb = Verb::push;
    push.preconditions = {Cond::hand_empty, Cond::target_is_compressible, Cond::target_in_bin};
    if (constraints.r5) push.preconditions.push_back(Cond::target_not_plastic);
    push.effects = {Effect::set_target_pushed};
    d.actions.push_back(push);

    return d;
}

InstructionKind parse_instruction(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        if (std::isalpha(static_cast<unsigned char>(ch))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        } else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);

    auto has = [&](const char* word) {
        return std::find(tokens.begin(), tokens.end(), word) != tokens.end();
    };
    if ((has("pack") || has("put") || has("place")) && (has("all") || has("everything")))
        return InstructionKind::pack_all;
    throw UnsupportedInstruction("cannot interpret instruction: \"" + text + "\"");
}

ProblemInstance build_problem(const std::string& instruction, const WorldState& s_init) {
    validate_world(s_init);
    for (const auto& o : s_init.objects) {
        if (!o.property) throw MissingProperty(o.name + " has no property label");
    }
    parse_instruction(instruction);  // pack_all is the only supported kind

    ProblemInstance p;
    p.instruction = instruction;
    p.s_init = s_init;
    for (const auto& o : s_init.objects) p.goal.rows.push_back({o.index, o.name, true});
    return p;
}

namespace {

std::string ljust(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string center(const std::string& s, std::size_t width) {
    if (s.size() >= width) return s;
    std::size_t left = (width - s.size()) / 2;
    std::size_t right = width - s.size() - left;
    return std::string(left, ' ') + s + std::string(right, ' ');
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_cells(const std::string& line) {
    // "| a | b |" -> {"a", "b"}
    std::vector<std::string> cells;
    std::string cur;
    bool inside = false;
    for (char ch : line) {
        if (ch == '|') {
            if (inside) cells.push_back(trim(cur));
            cur.clear();
            inside = true;
        } else if (inside) {
            cur += ch;
        }
    }
    return cells;
}

}  // namespace

std::string goal_table_text(const GoalSpec& goal) {
    std::size_t name_width = 4;  // "Name"
    for (const auto& row : goal.rows) name_width = std::max(name_width, row.name.size());

    std::ostringstream os;
    os << "| Index | " << ljust("Name", name_width) << " | Packed |\n";
    os << "|-------|" << std::string(name_width + 2, '-') << "|--------|\n";
    for (const auto& row : goal.rows) {
        os << '|' << center(std::to_string(row.index), 7) << "| " << ljust(row.name, name_width)
           << " | " << center(row.packed ? "True" : "False", 6) << " |\n";
    }
    return os.str();
}

GoalSpec parse_goal_table(const std::string& text) {
    GoalSpec goal;
    std::istringstream is(text);
    std::string line;
    bool seen_header = false;
    while (std::getline(is, line)) {
        std::string t = trim(line);
        if (t.empty() || t.front() != '|') continue;
        if (t.find("---") != std::string::npos) continue;
        auto cells = split_cells(t);
        if (cells.size() < 3) throw ParseFailure("goal table row too short", line);
        if (!seen_header) {
            if (cells[0] != "Index" || cells[2] != "Packed")
                throw ParseFailure("unexpected goal table header", line);
            seen_header = true;
            continue;
        }
        GoalRow row;
        try {
            row.index = std::stoi(cells[0]);
        } catch (const std::exception&) {
            throw ParseFailure("bad goal table index", cells[0]);
        }
        row.name = cells[1];
        if (!is_valid_object_name(row.name)) throw ParseFailure("bad goal table name", cells[1]);
        if (cells[2] == "True") {
            row.packed = true;
        } else if (cells[2] == "False") {
            row.packed = false;
        } else {
            throw ParseFailure("bad goal table state", cells[2]);
        }
        goal.rows.push_back(std::move(row));
    }
    if (!seen_header || goal.rows.empty()) throw ParseFailure("no goal table found");
    return goal;
}

std::string init_table_text(const WorldState& s) {
    static const std::vector<std::string> headers = {
        "Index", "Name", "In Bin", "Is Rigid", "Is Bendable", "Is Foldable",
        "Is Compressible", "Is Plastic"};
    std::size_t name_width = headers[1].size();
    for (const auto& o : s.objects) name_width = std::max(name_width, o.name.size());

    auto bool_text = [](bool b) { return std::string(b ? "True" : "False"); };

    std::vector<std::size_t> widths;
    for (const auto& h : headers) widths.push_back(h.size());
    widths[1] = name_width;

    std::ostringstream os;
    os << '|';
    for (std::size_t c = 0; c < headers.size(); ++c) os << ' ' << ljust(headers[c], widths[c]) << " |";
    os << '\n';
    os << '|';
    for (std::size_t c = 0; c < headers.size(); ++c) os << std::string(widths[c] + 2, '-') << '|';
    os << '\n';
    for (const auto& o : s.objects) {
        std::vector<std::string> cells = {
            std::to_string(o.index),
            o.name,
            bool_text(o.in_bin),
            bool_text(o.property == Property::rigid),
            bool_text(o.property == Property::bendable),
            bool_text(o.property == Property::foldable),
            bool_text(o.property == Property::compressible),
            bool_text(o.property == Property::plastic)};
        os << '|';
        for (std::size_t c = 0; c < cells.size(); ++c) os << ' ' << ljust(cells[c], widths[c]) << " |";
        os << '\n';
    }
    return os.str();
}

// ---- json ----

namespace {

nlohmann::json record_to_json(const ObjectRecord& o) {
    nlohmann::json j;
    j["index"] = o.index;
    j["name"] = o.name;
    j["color"] = o.color;
    j["dimension"] = to_string(o.dimension);
    j["shape"] = to_string(o.shape);
    j["property"] = o.property ? nlohmann::json(to_string(*o.property)) : nlohmann::json(nullptr);
    j["in_bin"] = o.in_bin;
    j["is_bent"] = o.is_bent;
    j["is_folded"] = o.is_folded;
    j["is_pushed"] = o.is_pushed;
    return j;
}

ObjectRecord record_from_json(const nlohmann::json& j) {
    ObjectRecord o;
    o.index = j.at("index").get<int>();
    o.name = j.at("name").get<std::string>();
    o.color = j.at("color").get<std::string>();
    auto dim = parse_dimension(j.at("dimension").get<std::string>());
    auto shape = parse_shape(j.at("shape").get<std::string>());
    if (!dim || !shape) throw FileError("bad dimension/shape for object " + o.name);
    o.dimension = *dim;
    o.shape = *shape;
    if (!j.at("property").is_null()) {
        auto p = parse_property(j.at("property").get<std::string>());
        if (!p) throw FileError("bad property for object " + o.name);
        o.property = *p;
    }
    o.in_bin = j.value("in_bin", false);
    o.is_bent = j.value("is_bent", false);
    o.is_folded = j.value("is_folded", false);
    o.is_pushed = j.value("is_pushed", false);
    return o;
}

nlohmann::json world_to_json(const WorldState& s) {
    nlohmann::json j;
    j["objects"] = nlohmann::json::array();
    for (const auto& o : s.objects) j["objects"].push_back(record_to_json(o));
    j["box"] = {{"index", s.box.index}, {"members", s.box.members}};
    j["hand_empty"] = s.hand_empty;
    j["holding"] = s.holding ? nlohmann::json(*s.holding) : nlohmann::json(nullptr);
    return j;
}

WorldState world_from_json(const nlohmann::json& j) {
    WorldState s;
    for (const auto& o : j.at("objects")) s.objects.push_back(record_from_json(o));
    s.box.index = j.at("box").at("index").get<int>();
    s.box.members = j.at("box").at("members").get<std::vector<int>>();
    s.hand_empty = j.at("hand_empty").get<bool>();
    if (!j.at("holding").is_null()) s.holding = j.at("holding").get<int>();
    validate_world(s);
    return s;
}

nlohmann::json constraints_to_json(const ConstraintSet& c) {
    return {{"r1", c.r1}, {"r2", c.r2}, {"r3", c.r3}, {"r4", c.r4}, {"r5", c.r5}};
}

ConstraintSet constraints_from_json(const nlohmann::json& j) {
    ConstraintSet c;
    c.r1 = j.value("r1", true);
    c.r2 = j.value("r2", true);
    c.r3 = j.value("r3", true);
    c.r4 = j.value("r4", true);
    c.r5 = j.value("r5", true);
    return c;
}

}  // namespace

std::string domain_to_json_text(const DomainDescription& d) {
    nlohmann::json j;
    j["constraints"] = constraints_to_json(d.constraints);
    j["actions"] = nlohmann::json::array();
    for (const auto& a : d.actions) {
        nlohmann::json ja;
        ja["verb"] = to_string(a.verb);
        ja["preconditions"] = nlohmann::json::array();
        for (Cond c : a.preconditions) ja["preconditions"].push_back(to_string(c));
        ja["plastic_guard"] = a.plastic_requires_compressible_in_box;
        ja["effects"] = nlohmann::json::array();
        for (Effect e : a.effects) ja["effects"].push_back(to_string(e));
        j["actions"].push_back(std::move(ja));
    }
    return j.dump(2) + "\n";
}

DomainDescription domain_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FileError(std::string("bad domain json: ") + e.what());
    }
    DomainDescription d;
    try {
        d.constraints = constraints_from_json(j.at("constraints"));
        for (const auto& ja : j.at("actions")) {
            ActionSchema a;
            auto verb = parse_verb(ja.at("verb").get<std::string>());
            if (!verb) throw FileError("unknown verb in domain json");
            a.verb = *verb;
            for (const auto& c : ja.at("preconditions")) {
                auto cond = parse_cond(c.get<std::string>());
                if (!cond) throw FileError("unknown precondition " + c.get<std::string>());
                a.preconditions.push_back(*cond);
            }
            a.plastic_requires_compressible_in_box = ja.value("plastic_guard", false);
            for (const auto& e : ja.at("effects")) {
                auto eff = parse_effect(e.get<std::string>());
                if (!eff) throw FileError("unknown effect " + e.get<std::string>());
                a.effects.push_back(*eff);
            }
            d.actions.push_back(std::move(a));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FileError(std::string("bad domain json: ") + e.what());
    }
    return d;
}

std::string world_to_json_text(const WorldState& s) { return world_to_json(s).dump(2) + "\n"; }

WorldState world_from_json_text(const std::string& text) {
    try {
        return world_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw FileError(std::string("bad world json: ") + e.what());
    }
}

std::string problem_to_json_text(const ProblemInstance& p) {
    nlohmann::json j;
    j["instruction"] = p.instruction;
    j["init"] = world_to_json(p.s_init);
    j["goal"]["rows"] = nlohmann::json::array();
    for (const auto& row : p.goal.rows) {
        j["goal"]["rows"].push_back(
            {{"index", row.index}, {"name", row.name}, {"packed", row.packed}});
    }
    return j.dump(2) + "\n";
}

ProblemInstance problem_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FileError(std::string("bad problem json: ") + e.what());
    }
    ProblemInstance p;
    try {
        p.instruction = j.at("instruction").get<std::string>();
        p.s_init = world_from_json(j.at("init"));
        for (const auto& row : j.at("goal").at("rows")) {
            p.goal.rows.push_back({row.at("index").get<int>(), row.at("name").get<std::string>(),
                                   row.at("packed").get<bool>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw FileError(std::string("bad problem json: ") + e.what());
    }
    return p;
}

}  // namespace probepack
