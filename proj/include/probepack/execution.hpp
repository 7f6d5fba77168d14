#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "probepack/planner.hpp"

namespace probepack {

inline constexpr const char* kTranscriptTerminator = "All task planning is done";
inline constexpr const char* kValidatorSuccessMessage = "Task planning is done successfully.";

struct StepResult {
    GroundAction action;
    bool ok = false;
    std::string line;  // "<verb> <name>" or "Cannot <verb> <name>"
};

struct ExecutionTranscript {
    std::vector<StepResult> steps;
    std::vector<WorldState> states;  // states[i] before step i; states.back() final
    bool terminated = false;         // terminator line emitted (no syntax error)
    std::optional<int> syntax_error_step;
    std::string syntax_error_message;

    const WorldState& final_state() const { return states.back(); }
    std::vector<std::string> lines() const;  // step lines plus terminator if any
    std::string text() const;
    int cannot_count() const;
};

// Applies one ground action; a failed precondition leaves the state untouched
// and yields a Cannot line.
StepResult apply_step(const DomainDescription& d, WorldState& s, const GroundAction& a);

ExecutionTranscript execute_plan(const DomainDescription& d, const WorldState& s_init,
                                 const Plan& plan);

// Text entry point: lines are parsed one at a time, execution continues past
// failed steps, and an unparseable line truncates the run before the
// terminator — that is the syntax-error signal the validator keys on.
ExecutionTranscript execute_plan_lines(const DomainDescription& d, const WorldState& s_init,
                                       const std::vector<std::string>& lines);

struct TranscriptEntry {
    Verb verb = Verb::pick;
    std::string name;
    bool ok = true;
};

struct ParsedTranscript {
    std::vector<TranscriptEntry> entries;
    bool terminated = false;
};

// Throws ParseFailure on a line outside the transcript grammar.
ParsedTranscript parse_transcript(const std::string& text);

struct ConstraintViolation {
    Rule rule = Rule::r1;
    int step = 0;  // index into transcript steps
    std::string detail;
};

struct AuditOptions {
    // R2 strict form additionally requires each compressible to be pushed
    // before any later object is placed.
    bool strict_r2 = false;
};

// Rule-by-rule check over the executed trace. R1 and R5 flag attempts (a
// blocked Cannot step still reveals planner intent); R2-R4 are judged on what
// actually happened to the box.
std::vector<ConstraintViolation> audit_constraints(const ExecutionTranscript& t,
                                                   const ConstraintSet& c,
                                                   const AuditOptions& options = {});

// A goal row holds when the object's in_bin flag matches the requested state.
bool goal_satisfied(const GoalSpec& goal, const WorldState& final_state);

enum class ErrorClass { none, syntax, semantic };

std::string to_string(ErrorClass e);

struct ValidationReport {
    ErrorClass error_class = ErrorClass::none;
    bool goal_reached = false;
    bool case_two = false;  // clean execution, goal still missed
    int cannot_count = 0;
    std::vector<ConstraintViolation> violations;
    std::optional<int> failed_step;
    std::vector<std::string> messages;

    bool success() const { return error_class == ErrorClass::none && goal_reached; }
};

ValidationReport validate(const ExecutionTranscript& t, const ProblemInstance& p,
                          const ConstraintSet& c, const AuditOptions& options = {});

struct PlannerFeedback {
    ErrorClass error_class = ErrorClass::none;
    std::optional<int> failed_step;
    std::vector<std::string> messages;
    std::string transcript_text;
};

PlannerFeedback make_feedback(const ValidationReport& report, const ExecutionTranscript& t);

class PlannerAdapter {
public:
    virtual ~PlannerAdapter() = default;
    virtual PlanningResult plan(const DomainDescription& d, const ProblemInstance& p,
                                std::uint64_t seed) = 0;
    virtual PlanningResult replan(const DomainDescription& d, const ProblemInstance& p,
                                  const PlannerFeedback& feedback, std::uint64_t seed,
                                  int iteration) = 0;
};

struct IterationReport {
    int iteration = 1;
    std::vector<std::string> plan_lines;
    ExecutionTranscript transcript;
    ValidationReport validation;
};

struct LoopOutcome {
    bool success = false;
    std::optional<std::string> infeasible_reason;
    int iterations_used = 0;
    std::vector<IterationReport> iterations;

    // 1-based iteration that succeeded, or 0.
    int success_iteration() const;
};

// Plan / execute / validate until clean or the replanning budget runs out.
// Iteration 1 executes against the caller's domain; every replanning iteration
// regenerates the action set canonically (the repair step) before asking the
// adapter again. max_replans >= 0; total attempts = max_replans + 1.
LoopOutcome validate_loop(PlannerAdapter& planner, const DomainDescription& domain,
                          const ProblemInstance& p, int max_replans, std::uint64_t seed,
                          const AuditOptions& options = {});

enum class FaultKind {
    // domain fault: place updates box membership but forgets the in_bin flag,
    // so every later push finds its precondition unsatisfied
    place_no_inbin_effect,
    // plan faults
    drop_push,              // remove every push step (breaks R2)
    swap_plastic_first,     // move the first plastic pick/place to the front (breaks R1)
    pick_then_fold,         // reorder fold after pick (fold then fails: hand busy)
    drop_place_after_bend,  // bend an object but never pack it (goal miss, case II)
    unknown_action_name,    // corrupt a verb (syntax truncation)
};

std::string to_string(FaultKind k);
const std::vector<FaultKind>& all_fault_kinds();
bool is_domain_fault(FaultKind k);

// Throws InapplicableFault when the domain lacks the required action.
DomainDescription inject_domain_fault(const DomainDescription& d, FaultKind k);

// Deterministic mutation at the first applicable site; context resolves names
// to properties. Throws InapplicableFault when the plan has no such site.
std::vector<std::string> inject_plan_fault(const std::vector<std::string>& lines, FaultKind k,
                                           const WorldState& context);

bool plan_fault_applicable(const std::vector<std::string>& lines, FaultKind k,
                           const WorldState& context);

}  // namespace probepack
