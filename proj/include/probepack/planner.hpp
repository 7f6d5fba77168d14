#pragma once

#include <optional>
#include <string>
#include <vector>

#include "probepack/domain.hpp"

namespace probepack {

struct GroundAction {
    Verb verb = Verb::pick;
    int object = 0;
    int box = 0;

    bool operator==(const GroundAction&) const = default;
};

struct Plan {
    std::vector<GroundAction> steps;

    bool operator==(const Plan&) const = default;
};

// One "<verb> <name>" line per step.
std::string plan_to_text(const Plan& plan, const WorldState& names);
std::vector<std::string> plan_to_lines(const Plan& plan, const WorldState& names);

// Throws ParseFailure on an unknown verb or object name.
Plan plan_from_lines(const std::vector<std::string>& lines, const WorldState& names);

std::string plan_to_json_text(const Plan& plan);
Plan plan_from_json_text(const std::string& text);

std::vector<std::string> split_lines(const std::string& text);
std::string join_lines(const std::vector<std::string>& lines);

// Schema precondition check against a concrete state (guard included).
bool preconditions_hold(const ActionSchema& schema, const WorldState& s, int object);

// All ground actions whose preconditions hold in s, in (verb, object) order.
std::vector<GroundAction> applicable_actions(const DomainDescription& d, const WorldState& s);

// The only unreachable situation under the canonical rules: a plastic object
// with no compressible object anywhere to admit it (R1 can never be satisfied).
// Returns the reason, or nullopt when feasible.
std::optional<std::string> check_feasibility(const DomainDescription& d, const ProblemInstance& p);

struct PlanningResult {
    std::optional<Plan> plan;                    // absent for infeasible or unparseable output
    std::vector<std::string> lines;              // always the emitted plan text
    std::optional<std::string> infeasible_reason;
};

// Deterministic planner. Objects are handled in phases: bendables (bend, pick,
// place), then foldables (fold, pick, place), then compressibles (pick, place,
// push), then plastics and rigids (pick, place); ascending index inside each
// phase. The compressible phase preceding the plastic phase discharges the R1
// guard by construction.
PlanningResult plan(const DomainDescription& d, const ProblemInstance& p);

// Steps needed by the canonical planner: 3 per deformable-recoverable object,
// 2 per rigid or plastic one.
int canonical_plan_length(const std::vector<ObjectRecord>& objects);

}  // namespace probepack
