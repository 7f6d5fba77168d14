#pragma once

#include <string>
#include <vector>

#include "probepack/execution.hpp"
#include "probepack/perception.hpp"
#include "probepack/probing.hpp"

namespace probepack {

// Answers are framed by these markers; parsers accept answers with or without
// the frame.
inline constexpr const char* kTemplateStart = "---template start---";
inline constexpr const char* kTemplateEnd = "---template end---";

enum class PromptRole {
    detector,
    namer,
    property_reasoner,
    predicate_generator,
    action_generator,
    init_describer,
    goal_describer,
    task_planner,
    replanner,
};

std::string to_string(PromptRole r);
const std::vector<PromptRole>& all_prompt_roles();

// Visual roles run at a lower top_p than text roles.
bool is_visual_role(PromptRole r);

struct PromptEnvelope {
    PromptRole role = PromptRole::detector;
    std::string system;
    std::string user;

    std::string cache_key() const;  // stable content hash as fixed-width hex
};

// ---- detector: scene listing in, one descriptor line per object out ----
PromptEnvelope render_detector_prompt(const SceneSpec& scene);
std::vector<VisualDescriptor> parse_detector_answer(const std::string& text);
std::string canonical_detector_answer(const SceneSpec& scene);

// ---- namer: descriptors in, "object: name1, name2, ..." out ----
PromptEnvelope render_namer_prompt(const std::vector<VisualDescriptor>& descriptors);
std::vector<std::string> parse_namer_answer(const std::string& text);
std::string canonical_namer_answer(const std::vector<VisualDescriptor>& descriptors);

// ---- property reasoner: probe observations in, one property out ----
PromptEnvelope render_property_prompt(const ObjectRecord& object, ProbeAction action,
                                      const ObservationTriple& obs);
Property parse_property_answer(const std::string& text);
std::string canonical_property_answer(const ObjectRecord& object, ProbeAction action,
                                      const ObservationTriple& obs);

// ---- predicate generator: object roster in, predicate list out (JSON) ----
PromptEnvelope render_predicate_prompt(const std::vector<ObjectRecord>& objects);
PredicateSpec parse_predicate_answer(const std::string& text);
std::string canonical_predicate_answer(const std::vector<ObjectRecord>& objects);

// ---- action generator: predicates plus rules in, schema set out (JSON) ----
PromptEnvelope render_action_prompt(const PredicateSpec& predicates, const ConstraintSet& rules);
DomainDescription parse_action_answer(const std::string& text);
std::string canonical_action_answer(const PredicateSpec& predicates, const ConstraintSet& rules);

// ---- init describer: object roster in, init table out ----
PromptEnvelope render_init_prompt(const std::vector<ObjectRecord>& objects);
WorldState parse_init_answer(const std::string& text);
std::string canonical_init_answer(const std::vector<ObjectRecord>& objects);

// ---- goal describer: roster plus instruction in, goal table out ----
PromptEnvelope render_goal_prompt(const std::vector<ObjectRecord>& objects,
                                  const std::string& instruction);
GoalSpec parse_goal_answer(const std::string& text);
std::string canonical_goal_answer(const std::vector<ObjectRecord>& objects,
                                  const std::string& instruction);

// ---- task planner / replanner: domain and instance in, action lines out ----
PromptEnvelope render_planner_prompt(const DomainDescription& d, const ProblemInstance& p);
PromptEnvelope render_replanner_prompt(const DomainDescription& d, const ProblemInstance& p,
                                       const PlannerFeedback& feedback);
std::vector<std::string> parse_plan_answer(const std::string& text);
std::string canonical_plan_answer(const DomainDescription& d, const ProblemInstance& p);

// Strips template markers, surrounding blank lines and code fences.
std::string strip_answer_frame(const std::string& text);

}  // namespace probepack
