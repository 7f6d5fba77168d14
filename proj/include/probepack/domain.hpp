#pragma once

#include <optional>
#include <string>
#include <vector>

#include "probepack/core.hpp"

namespace probepack {

enum class Verb { pick, place, bend, fold, push };

std::string to_string(Verb v);
std::optional<Verb> parse_verb(const std::string& s);
const std::vector<Verb>& all_verbs();

// Packing rules. R1: a plastic object may be placed only once a compressible
// object is in the box. R2: every compressible object is pushed after being
// placed. R3/R4: bendable/foldable objects are bent/folded before placement.
// R5: plastic objects are never bent, folded or pushed.
struct ConstraintSet {
    bool r1 = true;
    bool r2 = true;
    bool r3 = true;
    bool r4 = true;
    bool r5 = true;

    static ConstraintSet all() { return {}; }
    static ConstraintSet none() { return {false, false, false, false, false}; }
    bool operator==(const ConstraintSet&) const = default;
};

enum class Rule { r1, r2, r3, r4, r5 };

std::string to_string(Rule r);
std::string rule_description(Rule r);
bool rule_enabled(const ConstraintSet& c, Rule r);

// Atomic precondition over the action's target object (or the robot hand).
enum class Cond {
    hand_empty,
    holding_target,
    target_in_bin,
    target_not_in_bin,
    target_is_rigid,
    target_is_bendable,
    target_is_foldable,
    target_is_compressible,
    target_is_plastic,
    target_not_plastic,
};

std::string to_string(Cond c);

// Primitive state updates an action can perform. Setting the in_bin flag and
// appending to the box member list are deliberately separate operations; a
// domain that performs only one of them is well-formed but buggy, which is
// exactly the failure mode fault injection exercises.
enum class Effect {
    set_holding_target,
    clear_holding,
    set_hand_empty,
    clear_hand_empty,
    set_target_in_bin,
    add_target_to_box,
    set_target_bent,
    set_target_folded,
    set_target_pushed,
};

std::string to_string(Effect e);

struct ActionSchema {
    Verb verb = Verb::pick;
    std::vector<Cond> preconditions;
    // R1 guard: when the target is plastic, some current box member must be
    // compressible. Evaluated over box membership, not the in_bin flags.
    bool plastic_requires_compressible_in_box = false;
    std::vector<Effect> effects;

    bool operator==(const ActionSchema&) const = default;
};

struct DomainDescription {
    std::vector<ActionSchema> actions;
    ConstraintSet constraints;

    const ActionSchema& schema(Verb v) const;  // throws Error if absent
};

struct PredicateSpec {
    std::vector<std::string> property_predicates;  // is_rigid, ...
    std::vector<std::string> state_predicates;     // in_bin, member, ...
};

PredicateSpec generate_predicates(const std::vector<ObjectRecord>& objects);

// Canonical schema set under the enabled constraints. R1 contributes the place
// guard, R5 the not-plastic literals on the deforming actions; R2-R4 are plan
// ordering rules and live in the audit, not in the schemas.
DomainDescription generate_actions(const ConstraintSet& constraints);

inline DomainDescription canonical_domain() { return generate_actions(ConstraintSet::all()); }

enum class InstructionKind { pack_all };

// Understands "pack all ..." / "put all objects ..." phrasings; anything else
// throws UnsupportedInstruction.
InstructionKind parse_instruction(const std::string& text);

struct GoalRow {
    int index = 0;
    std::string name;
    bool packed = true;

    bool operator==(const GoalRow&) const = default;
};

struct GoalSpec {
    std::vector<GoalRow> rows;
    bool operator==(const GoalSpec&) const = default;
};

struct ProblemInstance {
    std::string instruction;
    WorldState s_init;
    GoalSpec goal;
};

// Builds the initial state and goal table for the instruction. Every object
// must already carry a property label (throws MissingProperty otherwise).
ProblemInstance build_problem(const std::string& instruction, const WorldState& s_init);

// Markdown-style tables; the exact layout is frozen and golden-tested since
// prompt parsing round-trips through it.
std::string goal_table_text(const GoalSpec& goal);
GoalSpec parse_goal_table(const std::string& text);  // throws ParseFailure

std::string init_table_text(const WorldState& s);

std::string domain_to_json_text(const DomainDescription& d);
DomainDescription domain_from_json_text(const std::string& text);

std::string problem_to_json_text(const ProblemInstance& p);
ProblemInstance problem_from_json_text(const std::string& text);

std::string world_to_json_text(const WorldState& s);
WorldState world_from_json_text(const std::string& text);

}  // namespace probepack
