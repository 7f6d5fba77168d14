#include "probepack/planner.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace probepack {

std::vector<std::string> plan_to_lines(const Plan& plan, const WorldState& names) {
    std::vector<std::string> lines;
    lines.reserve(plan.steps.size());
    for (const auto& step : plan.steps) {
        lines.push_back(to_string(step.verb) + " " + names.object(step.object).name);
    }
    return lines;
}

std::string plan_to_text(const Plan& plan, const WorldState& names) {
    return join_lines(plan_to_lines(plan, names));
}

Plan plan_from_lines(const std::vector<std::string>& lines, const WorldState& names) {
    Plan plan;
    for (const auto& line : lines) {
        std::istringstream is(line);
        std::string verb_token, name_token, extra;
        if (!(is >> verb_token >> name_token) || (is >> extra))
            throw ParseFailure("expected \"<verb> <object>\"", line);
        auto verb = parse_verb(verb_token);
        if (!verb) throw ParseFailure("unknown action", verb_token);
        auto object = names.find_object(name_token);
        if (!object) throw ParseFailure("unknown object", name_token);
        plan.steps.push_back({*verb, *object, 0});
    }
    return plan;
}

std::string plan_to_json_text(const Plan& plan) {
    nlohmann::json j;
    j["steps"] = nlohmann::json::array();
    for (const auto& s : plan.steps) {
        j["steps"].push_back({{"action", to_string(s.verb)}, {"object", s.object}, {"box", s.box}});
    }
    return j.dump(2) + "\n";
}

Plan plan_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FileError(std::string("bad plan json: ") + e.what());
    }
    Plan plan;
    try {
        for (const auto& s : j.at("steps")) {
            auto verb = parse_verb(s.at("action").get<std::string>());
            if (!verb) throw FileError("unknown action in plan json");
            plan.steps.push_back({*verb, s.at("object").get<int>(), s.value("box", 0)});
        }
    } catch (const nlohmann::json::exception& e) {
        throw FileError(std::string("bad plan json: ") + e.what());
    }
    return plan;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string text;
    for (const auto& line : lines) {
        text += line;
        text += '\n';
    }
    return text;
}

bool preconditions_hold(const ActionSchema& schema, const WorldState& s, int object) {
    const ObjectRecord& o = s.object(object);
    for (Cond c : schema.preconditions) {
        bool ok = true;
        switch (c) {
            case Cond::hand_empty: ok = s.hand_empty; break;
            case Cond::holding_target: ok = s.holding && *s.holding == object; break;
            case Cond::target_in_bin: ok = o.in_bin; break;
            case Cond::target_not_in_bin: ok = !o.in_bin; break;
            case Cond::target_is_rigid: ok = o.property == Property::rigid; break;
            case Cond::target_is_bendable: ok = o.property == Property::bendable; break;
            case Cond::target_is_foldable: ok = o.property == Property::foldable; break;
            case Cond::target_is_compressible: ok = o.property == Property::compressible; break;
            case Cond::target_is_plastic: ok = o.property == Property::plastic; break;
            case Cond::target_not_plastic: ok = o.property != Property::plastic; break;
        }
        if (!ok) return false;
    }
    if (schema.plastic_requires_compressible_in_box && o.property == Property::plastic) {
        bool compressible_in_box = false;
        for (int m : s.box.members) {
            if (s.object(m).property == Property::compressible) {
                compressible_in_box = true;
                break;
            }
        }
        if (!compressible_in_box) return false;
    }
    return true;
}

std::vector<GroundAction> applicable_actions(const DomainDescription& d, const WorldState& s) {
    std::vector<GroundAction> out;
    for (Verb v : all_verbs()) {
        const ActionSchema* schema = nullptr;
        for (const auto& a : d.actions) {
            if (a.verb == v) schema = &a;
        }
        if (!schema) continue;
        for (const auto& o : s.objects) {
            if (preconditions_hold(*schema, s, o.index)) out.push_back({v, o.index, 0});
        }
    }
    return out;
}

std::optional<std::string> check_feasibility(const DomainDescription& d,
                                             const ProblemInstance& p) {
    bool guard = false;
    for (const auto& a : d.actions) {
        if (a.verb == Verb::place && a.plastic_requires_compressible_in_box) guard = true;
    }
    if (!guard) return std::nullopt;

    std::vector<std::string> plastics;
    bool has_compressible = false;
    for (const auto& o : p.s_init.objects) {
        if (o.property == Property::plastic && !o.in_bin) plastics.push_back(o.name);
        if (o.property == Property::compressible) has_compressible = true;
    }
    if (plastics.empty() || has_compressible) return std::nullopt;

    std::string joined;
    for (std::size_t i = 0; i < plastics.size(); ++i) {
        if (i > 0) joined += ", ";
        joined += plastics[i];
    }
    return "no compressible object available to admit plastic object(s) " + joined +
           " into the box";
}

int canonical_plan_length(const std::vector<ObjectRecord>& objects) {
    int length = 0;
    for (const auto& o : objects) {
        if (o.in_bin) continue;
        switch (o.property.value_or(Property::rigid)) {
            case Property::bendable:
            case Property::foldable:
            case Property::compressible:
                length += 3;
                break;
            default:
                length += 2;
                break;
        }
    }
    return length;
}

PlanningResult plan(const DomainDescription& d, const ProblemInstance& p) {
    PlanningResult result;
    if (auto reason = check_feasibility(d, p)) {
        result.infeasible_reason = reason;
        return result;
    }

    auto with_property = [&](Property property) {
        std::vector<int> indices;
        for (const auto& o : p.s_init.objects) {
            if (!o.in_bin && o.property == property) indices.push_back(o.index);
        }
        return indices;
    };

    Plan out;
    for (int i : with_property(Property::bendable)) {
        out.steps.push_back({Verb::bend, i, 0});
        out.steps.push_back({Verb::pick, i, 0});
        out.steps.push_back({Verb::place, i, 0});
    }
    for (int i : with_property(Property::foldable)) {
        out.steps.push_back({Verb::fold, i, 0});
        out.steps.push_back({Verb::pick, i, 0});
        out.steps.push_back({Verb::place, i, 0});
    }
    for (int i : with_property(Property::compressible)) {
        out.steps.push_back({Verb::pick, i, 0});
        out.steps.push_back({Verb::place, i, 0});
        out.steps.push_back({Verb::push, i, 0});
    }
    for (int i : with_property(Property::plastic)) {
        out.steps.push_back({Verb::pick, i, 0});
        out.steps.push_back({Verb::place, i, 0});
    }
    for (int i : with_property(Property::rigid)) {
        out.steps.push_back({Verb::pick, i, 0});
        out.steps.push_back({Verb::place, i, 0});
    }

    result.lines = plan_to_lines(out, p.s_init);
    result.plan = std::move(out);
    return result;
}

}  // namespace probepack
