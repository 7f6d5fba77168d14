#include "probepack/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "probepack/planner.hpp"
#include "probepack/rng.hpp"

namespace probepack {

std::string to_string(PromptRole r) {
    switch (r) {
        case PromptRole::detector: return "detector";
        case PromptRole::namer: return "namer";
        case PromptRole::property_reasoner: return "property_reasoner";
        case PromptRole::predicate_generator: return "predicate_generator";
        case PromptRole::action_generator: return "action_generator";
        case PromptRole::init_describer: return "init_describer";
        case PromptRole::goal_describer: return "goal_describer";
        case PromptRole::task_planner: return "task_planner";
        case PromptRole::replanner: return "replanner";
    }
    return "?";
}

const std::vector<PromptRole>& all_prompt_roles() {
    static const std::vector<PromptRole> roles = {
        PromptRole::detector,       PromptRole::namer,           PromptRole::property_reasoner,
        PromptRole::predicate_generator, PromptRole::action_generator, PromptRole::init_describer,
        PromptRole::goal_describer, PromptRole::task_planner,    PromptRole::replanner};
    return roles;
}

bool is_visual_role(PromptRole r) {
    return r == PromptRole::detector || r == PromptRole::namer;
}

std::string PromptEnvelope::cache_key() const {
    std::string blob = to_string(role);
    blob += '\n';
    blob += system;
    blob += '\n';
    blob += user;
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(blob);
    return os.str();
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string frame(std::string body) {
    while (!body.empty() && body.back() == '\n') body.pop_back();
    std::string out = kTemplateStart;
    out += '\n';
    out += body;
    out += '\n';
    out += kTemplateEnd;
    out += '\n';
    return out;
}

// "Write your answer between the markers:" block shown inside every prompt.
std::string answer_block(const std::string& skeleton) {
    return frame(skeleton);
}

std::string num(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << v;
    return os.str();
}

std::string descriptor_text(const VisualDescriptor& d) {
    return d.color + " " + to_string(d.dimension) + " " + to_string(d.shape);
}

std::string view_listing(const std::string& label, const std::vector<SceneObjectView>& views) {
    std::ostringstream os;
    os << label << " view, " << views.size() << " segmented blobs:\n";
    for (std::size_t i = 0; i < views.size(); ++i) {
        const auto& v = views[i];
        os << "- blob " << i << ": color=" << v.color << ", shape=" << to_string(v.shape)
           << ", dimension=" << to_string(v.dimension) << ", centroid=(" << num(v.centroid.x)
           << ", " << num(v.centroid.y) << ")\n";
    }
    return os.str();
}

std::string roster_line(const ObjectRecord& o, bool with_property) {
    std::ostringstream os;
    os << "- " << o.index << ": " << o.name;
    if (with_property && o.property) os << " (" << to_string(*o.property) << ")";
    return os.str();
}

std::string roster_listing(const std::vector<ObjectRecord>& objects, bool with_property) {
    std::ostringstream os;
    for (const auto& o : objects) os << roster_line(o, with_property) << '\n';
    return os.str();
}

std::string rules_listing(const ConstraintSet& rules) {
    std::ostringstream os;
    for (Rule r : {Rule::r1, Rule::r2, Rule::r3, Rule::r4, Rule::r5}) {
        if (rule_enabled(rules, r)) os << "- " << to_string(r) << ": " << rule_description(r) << '\n';
    }
    return os.str();
}

std::string action_catalog(const DomainDescription& d) {
    std::ostringstream os;
    for (const auto& a : d.actions) {
        os << "- " << to_string(a.verb) << "(target): requires";
        if (a.preconditions.empty() && !a.plastic_requires_compressible_in_box) os << " nothing";
        for (std::size_t i = 0; i < a.preconditions.size(); ++i) {
            os << (i ? ", " : " ") << to_string(a.preconditions[i]);
        }
        if (a.plastic_requires_compressible_in_box) {
            os << (a.preconditions.empty() ? " " : ", ")
               << "a compressible box member when the target is plastic";
        }
        os << "; effects";
        for (std::size_t i = 0; i < a.effects.size(); ++i) {
            os << (i ? ", " : " ") << to_string(a.effects[i]);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace

std::string strip_answer_frame(const std::string& text) {
    std::vector<std::string> lines = split_lines(text);
    std::size_t begin = 0;
    std::size_t end = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]) == kTemplateStart) {
            begin = i + 1;
            break;
        }
    }
    for (std::size_t i = begin; i < lines.size(); ++i) {
        if (trim(lines[i]) == kTemplateEnd) {
            end = i;
            break;
        }
    }
    std::vector<std::string> kept;
    for (std::size_t i = begin; i < end; ++i) {
        std::string t = trim(lines[i]);
        if (t.rfind("```", 0) == 0) continue;  // code fences
        kept.push_back(lines[i]);
    }
    while (!kept.empty() && trim(kept.front()).empty()) kept.erase(kept.begin());
    while (!kept.empty() && trim(kept.back()).empty()) kept.pop_back();
    std::string out;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i) out += '\n';
        out += kept[i];
    }
    return out;
}

// ---- detector ----

PromptEnvelope render_detector_prompt(const SceneSpec& scene) {
    PromptEnvelope env;
    env.role = PromptRole::detector;
    env.system =
        "You are the perception stage of a desk-top packing robot. Two cameras watch the "
        "workspace, one from above and one from the side. Report every physical object on the "
        "desk exactly once; blobs in the two views that share a column belong to the same "
        "object.";
    std::ostringstream user;
    user << view_listing("Top", scene.top) << '\n' << view_listing("Side", scene.side) << '\n';
    user << "List every detected object on its own line as `<color> <dimension> <shape>`, in "
            "top-view order, between the markers:\n"
         << answer_block("<color> <dimension> <shape>");
    env.user = user.str();
    return env;
}

std::vector<VisualDescriptor> parse_detector_answer(const std::string& text) {
    std::vector<VisualDescriptor> out;
    for (const std::string& raw : split_lines(strip_answer_frame(text))) {
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.rfind("- ", 0) == 0) line = trim(line.substr(2));
        std::istringstream is(line);
        std::string color, dim_text, shape_text;
        is >> color >> dim_text >> shape_text;
        std::string extra;
        if (!is.eof()) is >> extra;
        if (color.empty() || dim_text.empty() || shape_text.empty() || !extra.empty())
            throw ParseFailure("expected `<color> <dimension> <shape>`", raw);
        auto dim = parse_dimension(dim_text);
        auto shape = parse_shape(shape_text);
        if (!dim || !shape) throw ParseFailure("unknown dimension or shape", raw);
        if (shape_dimension(*shape) != *dim)
            throw ParseFailure("dimension does not match shape", raw);
        out.push_back({color, *dim, *shape});
    }
    if (out.empty()) throw ParseFailure("no objects in detector answer");
    return out;
}

std::string canonical_detector_answer(const SceneSpec& scene) {
    std::ostringstream body;
    for (const auto& v : scene.top)
        body << v.color << ' ' << to_string(v.dimension) << ' ' << to_string(v.shape) << '\n';
    return frame(body.str());
}

// ---- namer ----

PromptEnvelope render_namer_prompt(const std::vector<VisualDescriptor>& descriptors) {
    PromptEnvelope env;
    env.role = PromptRole::namer;
    env.system =
        "You assign working names to the objects a packing robot has detected. Names follow "
        "`color_dimension_shape`; when several objects share a description the repeats get "
        "suffixes _2, _3, ... in listing order and the first keeps the bare name.";
    std::ostringstream user;
    user << "Detected objects:\n";
    for (const auto& d : descriptors) user << "- " << descriptor_text(d) << '\n';
    user << "\nReply with one line `object: <name1>, <name2>, ...` naming them in the same "
            "order, between the markers:\n"
         << answer_block("object: <name1>, <name2>, ...");
    env.user = user.str();
    return env;
}

std::vector<std::string> parse_namer_answer(const std::string& text) {
    for (const std::string& raw : split_lines(strip_answer_frame(text))) {
        std::string line = trim(raw);
        if (line.rfind("object:", 0) != 0) continue;
        std::string rest = line.substr(7);
        std::vector<std::string> names;
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            std::size_t comma = rest.find(',', pos);
            std::string item = trim(comma == std::string::npos ? rest.substr(pos)
                                                               : rest.substr(pos, comma - pos));
            if (!item.empty()) {
                if (!is_valid_object_name(item)) throw ParseFailure("bad object name", item);
                names.push_back(item);
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (names.empty()) throw ParseFailure("empty name list", raw);
        return names;
    }
    throw ParseFailure("no `object:` line in namer answer");
}

std::string canonical_namer_answer(const std::vector<VisualDescriptor>& descriptors) {
    auto names = assign_names(descriptors);
    std::string body = "object: ";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) body += ", ";
        body += names[i];
    }
    return frame(body);
}

// ---- property reasoner ----

PromptEnvelope render_property_prompt(const ObjectRecord& object, ProbeAction action,
                                      const ObservationTriple& obs) {
    PromptEnvelope env;
    env.role = PromptRole::property_reasoner;
    env.system =
        "You label the physical property of one object a robot arm has just probed. The "
        "possible labels are rigid, bendable, foldable, compressible and plastic. An object "
        "whose shape stays original during the probe is rigid. One that deforms during the "
        "probe and recovers afterwards is bendable when the probe was a bend, foldable when it "
        "was a fold, and compressible when it was a push. One that deforms and stays deformed "
        "is plastic.";
    std::ostringstream user;
    user << "Object: " << object.name << " (" << object.color << ' ' << to_string(object.dimension)
         << ' ' << to_string(object.shape) << ")\n";
    user << "Probe: " << to_string(action) << '\n';
    user << "Shape before the probe: " << to_string(obs.before) << '\n';
    user << "Shape during the probe: " << to_string(obs.during) << '\n';
    user << "Shape after the probe: " << to_string(obs.after) << '\n';
    user << "\nAnswer with the single property word between the markers:\n"
         << answer_block("<property>");
    env.user = user.str();
    return env;
}

Property parse_property_answer(const std::string& text) {
    std::string body = lower(trim(strip_answer_frame(text)));
    auto p = parse_property(body);
    if (!p) throw ParseFailure("not a property label", body);
    return *p;
}

std::string canonical_property_answer(const ObjectRecord& object, ProbeAction action,
                                      const ObservationTriple& obs) {
    (void)object;
    return frame(to_string(classify_property(obs, action)));
}

// ---- predicate generator ----

PromptEnvelope render_predicate_prompt(const std::vector<ObjectRecord>& objects) {
    PromptEnvelope env;
    env.role = PromptRole::predicate_generator;
    env.system =
        "You prepare the symbolic vocabulary a packing planner will reason with: one predicate "
        "per property label an object can carry, plus the state facts the packing actions read "
        "and write (bin membership, box membership, the gripper, and the bent/folded/pushed "
        "marks).";
    std::ostringstream user;
    user << "Objects on the desk:\n" << roster_listing(objects, true) << '\n';
    user << "Emit JSON with two string arrays, `property_predicates` and `state_predicates`, "
            "between the markers:\n"
         << answer_block("{\"property_predicates\": [...], \"state_predicates\": [...]}");
    env.user = user.str();
    return env;
}

PredicateSpec parse_predicate_answer(const std::string& text) {
    std::string body = strip_answer_frame(text);
    try {
        auto j = nlohmann::json::parse(body);
        PredicateSpec spec;
        spec.property_predicates = j.at("property_predicates").get<std::vector<std::string>>();
        spec.state_predicates = j.at("state_predicates").get<std::vector<std::string>>();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ParseFailure(std::string("bad predicate json: ") + e.what());
    }
}

std::string canonical_predicate_answer(const std::vector<ObjectRecord>& objects) {
    PredicateSpec spec = generate_predicates(objects);
    nlohmann::json j;
    j["property_predicates"] = spec.property_predicates;
    j["state_predicates"] = spec.state_predicates;
    return frame(j.dump(2));
}

// ---- action generator ----

PromptEnvelope render_action_prompt(const PredicateSpec& predicates, const ConstraintSet& rules) {
    PromptEnvelope env;
    env.role = PromptRole::action_generator;
    env.system =
        "You write the action schemas for a one-gripper packing robot: pick, place, bend, fold "
        "and push. Preconditions and effects are drawn from the given predicates; the packing "
        "rules below must be impossible to break where a precondition can enforce them.";
    nlohmann::json jp;
    jp["property_predicates"] = predicates.property_predicates;
    jp["state_predicates"] = predicates.state_predicates;
    std::ostringstream user;
    user << "Predicates:\n" << jp.dump(2) << "\n\nPacking rules in force:\n"
         << rules_listing(rules);
    user << "\nEmit the action set as JSON with a `constraints` object (r1..r5 booleans) and an "
            "`actions` array of {verb, preconditions, plastic_guard, effects}, between the "
            "markers:\n"
         << answer_block("{\"constraints\": {...}, \"actions\": [...]}");
    env.user = user.str();
    return env;
}

DomainDescription parse_action_answer(const std::string& text) {
    try {
        return domain_from_json_text(strip_answer_frame(text));
    } catch (const FileError& e) {
        throw ParseFailure(e.what());
    }
}

std::string canonical_action_answer(const PredicateSpec& predicates, const ConstraintSet& rules) {
    (void)predicates;
    std::string body = domain_to_json_text(generate_actions(rules));
    return frame(body);
}

// ---- init describer ----

PromptEnvelope render_init_prompt(const std::vector<ObjectRecord>& objects) {
    PromptEnvelope env;
    env.role = PromptRole::init_describer;
    env.system =
        "You write down the initial state of the packing workspace as a table. Every object "
        "starts on the desk outside the bin and the gripper starts empty.";
    std::ostringstream user;
    user << "Objects on the desk with their probed properties:\n" << roster_listing(objects, true)
         << '\n';
    user << "Fill in the state table with columns Index, Name, In Bin, Is Rigid, Is Bendable, "
            "Is Foldable, Is Compressible and Is Plastic (True/False cells), one row per "
            "object, between the markers:\n"
         << answer_block("| Index | Name | In Bin | ... |");
    env.user = user.str();
    return env;
}

WorldState parse_init_answer(const std::string& text) {
    std::vector<ObjectRecord> objects;
    std::vector<int> in_bin_rows;
    bool seen_header = false;
    for (const std::string& raw : split_lines(strip_answer_frame(text))) {
        std::string line = trim(raw);
        if (line.empty() || line.front() != '|') continue;
        if (line.find("---") != std::string::npos) continue;
        std::vector<std::string> cells;
        {
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
        }
        if (cells.size() < 8) throw ParseFailure("state table row too short", raw);
        if (!seen_header) {
            if (cells[0] != "Index" || cells[1] != "Name" || cells[2] != "In Bin")
                throw ParseFailure("unexpected state table header", raw);
            seen_header = true;
            continue;
        }
        ObjectRecord o;
        try {
            o.index = std::stoi(cells[0]);
        } catch (const std::exception&) {
            throw ParseFailure("bad state table index", cells[0]);
        }
        o.name = cells[1];
        ObjectName parsed;
        try {
            parsed = parse_object_name(o.name);
        } catch (const MalformedName& e) {
            throw ParseFailure(e.what());
        }
        o.color = parsed.color;
        o.dimension = parsed.dimension;
        o.shape = parsed.shape;
        auto flag = [&](std::size_t c) {
            if (cells[c] == "True") return true;
            if (cells[c] == "False") return false;
            throw ParseFailure("state table cell is not True/False", cells[c]);
        };
        o.in_bin = flag(2);
        static const std::vector<Property> column_order = {
            Property::rigid, Property::bendable, Property::foldable, Property::compressible,
            Property::plastic};
        int set_count = 0;
        for (std::size_t c = 0; c < column_order.size(); ++c) {
            if (flag(3 + c)) {
                o.property = column_order[c];
                ++set_count;
            }
        }
        if (set_count != 1) throw ParseFailure("state table row needs exactly one property", raw);
        if (o.in_bin) in_bin_rows.push_back(o.index);
        objects.push_back(std::move(o));
    }
    if (!seen_header || objects.empty()) throw ParseFailure("no state table found");
    WorldState s;
    s.objects = std::move(objects);
    s.box.members = in_bin_rows;
    validate_world(s);
    return s;
}

std::string canonical_init_answer(const std::vector<ObjectRecord>& objects) {
    return frame(init_table_text(make_initial_state(objects)));
}

// ---- goal describer ----

PromptEnvelope render_goal_prompt(const std::vector<ObjectRecord>& objects,
                                  const std::string& instruction) {
    PromptEnvelope env;
    env.role = PromptRole::goal_describer;
    env.system =
        "You translate a natural-language packing instruction into a goal table. The Packed "
        "column says whether each object must end up in the bin.";
    std::ostringstream user;
    user << "Instruction: " << instruction << "\n\nObjects on the desk:\n"
         << roster_listing(objects, false) << '\n';
    user << "Fill in the goal table with columns Index, Name and Packed (True/False), one row "
            "per object, between the markers:\n"
         << answer_block("| Index | Name | Packed |");
    env.user = user.str();
    return env;
}

GoalSpec parse_goal_answer(const std::string& text) {
    return parse_goal_table(strip_answer_frame(text));
}

std::string canonical_goal_answer(const std::vector<ObjectRecord>& objects,
                                  const std::string& instruction) {
    parse_instruction(instruction);  // only the pack-everything form is understood
    GoalSpec goal;
    for (const auto& o : objects) goal.rows.push_back({o.index, o.name, true});
    return frame(goal_table_text(goal));
}

// ---- task planner / replanner ----

namespace {

std::string planner_user_text(const DomainDescription& d, const ProblemInstance& p) {
    std::ostringstream user;
    user << "Instruction: " << p.instruction << "\n\nActions:\n" << action_catalog(d);
    std::string rules = rules_listing(d.constraints);
    if (!rules.empty()) user << "\nPacking rules in force:\n" << rules;
    user << "\nInitial state:\n" << init_table_text(p.s_init) << "\nGoal:\n"
         << goal_table_text(p.goal);
    user << "\nWrite the plan one action per line as `<verb> <object_name>`, between the "
            "markers. If the goal cannot be reached, write a single line starting with "
            "`infeasible:` followed by the reason.\n"
         << answer_block("<verb> <object_name>");
    return user.str();
}

}  // namespace

PromptEnvelope render_planner_prompt(const DomainDescription& d, const ProblemInstance& p) {
    PromptEnvelope env;
    env.role = PromptRole::task_planner;
    env.system =
        "You plan bin packing for a desk robot with a single gripper. Actions run strictly in "
        "the order you list them; a step whose preconditions fail is skipped by the hardware "
        "and reported back, so emit only steps that can actually run.";
    env.user = planner_user_text(d, p);
    return env;
}

PromptEnvelope render_replanner_prompt(const DomainDescription& d, const ProblemInstance& p,
                                       const PlannerFeedback& feedback) {
    PromptEnvelope env;
    env.role = PromptRole::replanner;
    env.system =
        "You repair a packing plan that failed validation. Use the execution feedback to find "
        "the broken step, then emit a complete corrected plan from the same initial state (not "
        "a continuation).";
    std::ostringstream user;
    user << planner_user_text(d, p);
    user << "\nPrevious attempt failed (" << to_string(feedback.error_class) << " error";
    if (feedback.failed_step) user << " at step " << *feedback.failed_step;
    user << ").\n";
    if (!feedback.messages.empty()) {
        user << "Validator messages:\n";
        for (const auto& m : feedback.messages) user << "- " << m << '\n';
    }
    if (!feedback.transcript_text.empty())
        user << "Execution transcript:\n" << feedback.transcript_text;
    env.user = user.str();
    return env;
}

std::vector<std::string> parse_plan_answer(const std::string& text) {
    std::vector<std::string> lines;
    for (const std::string& raw : split_lines(strip_answer_frame(text))) {
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line == kTranscriptTerminator) continue;
        if (lower(line).rfind("infeasible", 0) == 0) {
            // Pass the declaration through untouched; the adapter turns it into
            // an infeasibility result.
            return {line};
        }
        std::istringstream is(line);
        std::string verb_text, name, extra;
        is >> verb_text >> name;
        if (!is.eof()) is >> extra;
        if (!parse_verb(verb_text) || name.empty() || !extra.empty())
            throw ParseFailure("expected `<verb> <object_name>`", raw);
        if (!is_valid_object_name(name)) throw ParseFailure("bad object name", name);
        lines.push_back(verb_text + " " + name);
    }
    if (lines.empty()) throw ParseFailure("empty plan answer");
    return lines;
}

std::string canonical_plan_answer(const DomainDescription& d, const ProblemInstance& p) {
    PlanningResult result = plan(d, p);
    if (result.infeasible_reason) return frame("infeasible: " + *result.infeasible_reason);
    return frame(join_lines(result.lines));
}

}  // namespace probepack
