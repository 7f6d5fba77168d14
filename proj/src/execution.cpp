#include "probepack/execution.hpp"

#include <algorithm>
#include <sstream>

#include "probepack/rng.hpp"

namespace probepack {

std::vector<std::string> ExecutionTranscript::lines() const {
    std::vector<std::string> out;
    out.reserve(steps.size() + 1);
    for (const auto& s : steps) out.push_back(s.line);
    if (terminated) out.push_back(kTranscriptTerminator);
    return out;
}

std::string ExecutionTranscript::text() const { return join_lines(lines()); }

int ExecutionTranscript::cannot_count() const {
    int n = 0;
    for (const auto& s : steps) {
        if (!s.ok) ++n;
    }
    return n;
}

StepResult apply_step(const DomainDescription& d, WorldState& s, const GroundAction& a) {
    StepResult result;
    result.action = a;
    const std::string& name = s.object(a.object).name;

    const ActionSchema* schema = nullptr;
    for (const auto& candidate : d.actions) {
        if (candidate.verb == a.verb) schema = &candidate;
    }
    bool ok = schema != nullptr && preconditions_hold(*schema, s, a.object);
    result.ok = ok;
    result.line = (ok ? "" : "Cannot ") + to_string(a.verb) + " " + name;
    if (!ok) return result;  // failed steps leave the state untouched

    ObjectRecord& target = s.object(a.object);
    for (Effect e : schema->effects) {
        switch (e) {
            case Effect::set_holding_target:
                s.holding = a.object;
                break;
            case Effect::clear_holding:
                s.holding = std::nullopt;
                break;
            case Effect::set_hand_empty:
                s.hand_empty = true;
                break;
            case Effect::clear_hand_empty:
                s.hand_empty = false;
                break;
            case Effect::set_target_in_bin:
                target.in_bin = true;
                break;
            case Effect::add_target_to_box:
                if (!s.box.contains(a.object)) s.box.members.push_back(a.object);
                break;
            case Effect::set_target_bent:
                target.is_bent = true;
                break;
            case Effect::set_target_folded:
                target.is_folded = true;
                break;
            case Effect::set_target_pushed:
                target.is_pushed = true;
                break;
        }
    }
    return result;
}

ExecutionTranscript execute_plan(const DomainDescription& d, const WorldState& s_init,
                                 const Plan& plan) {
    ExecutionTranscript t;
    WorldState state = s_init;
    t.states.push_back(state);
    for (const auto& action : plan.steps) {
        t.steps.push_back(apply_step(d, state, action));
        t.states.push_back(state);
    }
    t.terminated = true;
    return t;
}

ExecutionTranscript execute_plan_lines(const DomainDescription& d, const WorldState& s_init,
                                       const std::vector<std::string>& lines) {
    ExecutionTranscript t;
    WorldState state = s_init;
    t.states.push_back(state);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        GroundAction action;
        try {
            Plan one = plan_from_lines({lines[i]}, s_init);
            action = one.steps.at(0);
        } catch (const ParseFailure& e) {
            // An unparseable step aborts the run before the terminator prints;
            // the missing terminator is what flags the syntax error.
            t.syntax_error_step = static_cast<int>(i);
            t.syntax_error_message = e.what();
            return t;
        }
        t.steps.push_back(apply_step(d, state, action));
        t.states.push_back(state);
    }
    t.terminated = true;
    return t;
}

ParsedTranscript parse_transcript(const std::string& text) {
    ParsedTranscript out;
    auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty()) continue;
        if (line == kTranscriptTerminator) {
            if (i + 1 != lines.size()) throw ParseFailure("terminator before end of transcript");
            out.terminated = true;
            continue;
        }
        TranscriptEntry entry;
        std::string rest = line;
        if (rest.rfind("Cannot ", 0) == 0) {
            entry.ok = false;
            rest = rest.substr(7);
        }
        std::istringstream is(rest);
        std::string verb_token, name_token, extra;
        if (!(is >> verb_token >> name_token) || (is >> extra))
            throw ParseFailure("bad transcript line", line);
        auto verb = parse_verb(verb_token);
        if (!verb) throw ParseFailure("unknown verb in transcript", verb_token);
        if (!is_valid_object_name(name_token))
            throw ParseFailure("bad object name in transcript", name_token);
        entry.verb = *verb;
        entry.name = name_token;
        out.entries.push_back(std::move(entry));
    }
    return out;
}

std::vector<ConstraintViolation> audit_constraints(const ExecutionTranscript& t,
                                                   const ConstraintSet& c,
                                                   const AuditOptions& options) {
    std::vector<ConstraintViolation> violations;
    const int n = static_cast<int>(t.steps.size());

    auto property_of = [&](int object) {
        return t.states.front().object(object).property.value_or(Property::rigid);
    };
    auto name_of = [&](int object) { return t.states.front().object(object).name; };

    for (int i = 0; i < n; ++i) {
        const StepResult& step = t.steps[i];
        const WorldState& before = t.states[i];
        Property prop = property_of(step.action.object);

        // R1 and R5 judge attempts: a blocked step still reveals that the plan
        // ordered a forbidden move.
        if (c.r1 && step.action.verb == Verb::place && prop == Property::plastic) {
            bool compressible_in_box = false;
            for (int m : before.box.members) {
                if (property_of(m) == Property::compressible) compressible_in_box = true;
            }
            if (!compressible_in_box) {
                violations.push_back(
                    {Rule::r1, i,
                     "plastic " + name_of(step.action.object) +
                         " placed with no compressible object in the box"});
            }
        }
        if (c.r5 && prop == Property::plastic &&
            (step.action.verb == Verb::bend || step.action.verb == Verb::fold ||
             step.action.verb == Verb::push)) {
            violations.push_back({Rule::r5, i,
                                  to_string(step.action.verb) + " applied to plastic " +
                                      name_of(step.action.object)});
        }

        if (!step.ok) continue;

        // R3/R4 judge what actually entered the box.
        if (step.action.verb == Verb::place) {
            if (c.r3 && prop == Property::bendable && !before.object(step.action.object).is_bent) {
                violations.push_back({Rule::r3, i,
                                      name_of(step.action.object) + " placed without being bent"});
            }
            if (c.r4 && prop == Property::foldable &&
                !before.object(step.action.object).is_folded) {
                violations.push_back({Rule::r4, i,
                                      name_of(step.action.object) + " placed without being folded"});
            }
            if (c.r2 && prop == Property::compressible) {
                bool pushed = false;
                bool late = false;
                for (int j = i + 1; j < n && !pushed; ++j) {
                    const StepResult& later = t.steps[j];
                    if (!later.ok) continue;
                    if (later.action.verb == Verb::push &&
                        later.action.object == step.action.object) {
                        pushed = true;
                        if (options.strict_r2 && late) pushed = false;
                        break;
                    }
                    if (later.action.verb == Verb::place) late = true;
                }
                if (!pushed) {
                    violations.push_back({Rule::r2, i,
                                          "compressible " + name_of(step.action.object) +
                                              " not pushed after placement"});
                }
            }
        }
    }
    std::sort(violations.begin(), violations.end(),
              [](const ConstraintViolation& a, const ConstraintViolation& b) {
                  return a.step != b.step ? a.step < b.step
                                          : static_cast<int>(a.rule) < static_cast<int>(b.rule);
              });
    return violations;
}

bool goal_satisfied(const GoalSpec& goal, const WorldState& final_state) {
    for (const auto& row : goal.rows) {
        auto index = final_state.find_object(row.name);
        if (!index) return false;
        if (final_state.object(*index).in_bin != row.packed) return false;
    }
    return true;
}

std::string to_string(ErrorClass e) {
    switch (e) {
        case ErrorClass::none: return "none";
        case ErrorClass::syntax: return "syntax";
        case ErrorClass::semantic: return "semantic";
    }
    return "?";
}

ValidationReport validate(const ExecutionTranscript& t, const ProblemInstance& p,
                          const ConstraintSet& c, const AuditOptions& options) {
    ValidationReport report;
    report.cannot_count = t.cannot_count();
    report.violations = audit_constraints(t, c, options);
    report.goal_reached = goal_satisfied(p.goal, t.final_state());

    if (t.syntax_error_step) {
        report.error_class = ErrorClass::syntax;
        report.failed_step = t.syntax_error_step;
        report.goal_reached = false;  // a truncated run proves nothing
        report.messages.push_back("syntax error at step " +
                                  std::to_string(*t.syntax_error_step) + ": " +
                                  t.syntax_error_message);
        return report;
    }

    bool clean = report.cannot_count == 0 && report.violations.empty();
    if (clean && report.goal_reached) {
        report.error_class = ErrorClass::none;
        report.messages.push_back(kValidatorSuccessMessage);
        return report;
    }

    report.error_class = ErrorClass::semantic;
    report.case_two = clean && !report.goal_reached;

    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        if (!t.steps[i].ok) {
            if (!report.failed_step) report.failed_step = static_cast<int>(i);
            report.messages.push_back("step " + std::to_string(i) + ": " + t.steps[i].line);
        }
    }
    for (const auto& v : report.violations) {
        if (!report.failed_step) report.failed_step = v.step;
        report.messages.push_back("step " + std::to_string(v.step) + " violates " +
                                  to_string(v.rule) + ": " + v.detail);
    }
    if (!report.goal_reached) {
        int packed = 0;
        for (const auto& row : p.goal.rows) {
            auto index = t.final_state().find_object(row.name);
            if (index && t.final_state().object(*index).in_bin == row.packed) ++packed;
        }
        report.messages.push_back("goal not reached: " + std::to_string(packed) + " of " +
                                  std::to_string(p.goal.rows.size()) + " objects packed");
        if (!report.failed_step) {
            report.failed_step = t.steps.empty() ? 0 : static_cast<int>(t.steps.size()) - 1;
        }
    }
    return report;
}

PlannerFeedback make_feedback(const ValidationReport& report, const ExecutionTranscript& t) {
    PlannerFeedback f;
    f.error_class = report.error_class;
    f.failed_step = report.failed_step;
    f.messages = report.messages;
    f.transcript_text = t.text();
    return f;
}

int LoopOutcome::success_iteration() const {
    return success ? static_cast<int>(iterations.size()) : 0;
}

LoopOutcome validate_loop(PlannerAdapter& planner, const DomainDescription& domain,
                          const ProblemInstance& p, int max_replans, std::uint64_t seed,
                          const AuditOptions& options) {
    if (max_replans < 0) throw Error("max_replans must be >= 0");
    LoopOutcome outcome;
    if (auto reason = check_feasibility(generate_actions(domain.constraints), p)) {
        outcome.infeasible_reason = reason;
        return outcome;
    }

    DomainDescription current = domain;
    PlannerFeedback feedback;
    for (int iteration = 1; iteration <= max_replans + 1; ++iteration) {
        std::uint64_t iter_seed = derive_seed(seed, "iteration", iteration);
        PlanningResult planned =
            iteration == 1 ? planner.plan(current, p, iter_seed)
                           : planner.replan(current, p, feedback, iter_seed, iteration);
        if (planned.infeasible_reason) {
            outcome.infeasible_reason = planned.infeasible_reason;
            break;
        }

        IterationReport report;
        report.iteration = iteration;
        report.plan_lines = planned.lines;
        report.transcript = execute_plan_lines(current, p.s_init, planned.lines);
        report.validation = validate(report.transcript, p, current.constraints, options);
        bool succeeded = report.validation.success();
        feedback = make_feedback(report.validation, report.transcript);
        outcome.iterations.push_back(std::move(report));

        if (succeeded) {
            outcome.success = true;
            break;
        }
        // Repair step before the next attempt: rebuild the action set from the
        // rule set, which discards any injected domain defect.
        current = generate_actions(domain.constraints);
    }
    outcome.iterations_used = static_cast<int>(outcome.iterations.size());
    return outcome;
}

std::string to_string(FaultKind k) {
    switch (k) {
        case FaultKind::place_no_inbin_effect: return "place_no_inbin_effect";
        case FaultKind::drop_push: return "drop_push";
        case FaultKind::swap_plastic_first: return "swap_plastic_first";
        case FaultKind::pick_then_fold: return "pick_then_fold";
        case FaultKind::drop_place_after_bend: return "drop_place_after_bend";
        case FaultKind::unknown_action_name: return "unknown_action_name";
    }
    return "?";
}

const std::vector<FaultKind>& all_fault_kinds() {
    static const std::vector<FaultKind> kinds = {
        FaultKind::place_no_inbin_effect, FaultKind::drop_push,
        FaultKind::swap_plastic_first,    FaultKind::pick_then_fold,
        FaultKind::drop_place_after_bend, FaultKind::unknown_action_name};
    return kinds;
}

bool is_domain_fault(FaultKind k) { return k == FaultKind::place_no_inbin_effect; }

DomainDescription inject_domain_fault(const DomainDescription& d, FaultKind k) {
    if (k != FaultKind::place_no_inbin_effect)
        throw InapplicableFault(to_string(k) + " is not a domain fault");
    DomainDescription out = d;
    for (auto& schema : out.actions) {
        if (schema.verb != Verb::place) continue;
        auto it = std::find(schema.effects.begin(), schema.effects.end(),
                            Effect::set_target_in_bin);
        if (it == schema.effects.end())
            throw InapplicableFault("place already lacks the in_bin effect");
        schema.effects.erase(it);
        return out;
    }
    throw InapplicableFault("domain has no place action");
}

namespace {

struct ParsedLine {
    Verb verb = Verb::pick;
    std::string name;
};

std::optional<ParsedLine> parse_action_line(const std::string& line) {
    std::istringstream is(line);
    std::string verb_token, name_token, extra;
    if (!(is >> verb_token >> name_token) || (is >> extra)) return std::nullopt;
    auto verb = parse_verb(verb_token);
    if (!verb) return std::nullopt;
    return ParsedLine{*verb, name_token};
}

std::optional<Property> property_of_name(const WorldState& context, const std::string& name) {
    auto index = context.find_object(name);
    if (!index) return std::nullopt;
    return context.object(*index).property;
}

std::vector<std::string> apply_plan_fault(const std::vector<std::string>& lines, FaultKind k,
                                          const WorldState& context, bool* applicable) {
    auto fail = [&]() -> std::vector<std::string> {
        *applicable = false;
        return lines;
    };
    *applicable = true;

    switch (k) {
        case FaultKind::drop_push: {
            std::vector<std::string> out;
            for (const auto& line : lines) {
                auto parsed = parse_action_line(line);
                if (parsed && parsed->verb == Verb::push) continue;
                out.push_back(line);
            }
            if (out.size() == lines.size()) return fail();
            return out;
        }
        case FaultKind::swap_plastic_first: {
            for (std::size_t i = 1; i < lines.size(); ++i) {
                auto pick = parse_action_line(lines[i]);
                if (!pick || pick->verb != Verb::pick) continue;
                if (property_of_name(context, pick->name) != Property::plastic) continue;
                for (std::size_t j = i + 1; j < lines.size(); ++j) {
                    auto place = parse_action_line(lines[j]);
                    if (!place || place->verb != Verb::place || place->name != pick->name)
                        continue;
                    std::vector<std::string> out = {lines[i], lines[j]};
                    for (std::size_t t = 0; t < lines.size(); ++t) {
                        if (t != i && t != j) out.push_back(lines[t]);
                    }
                    return out;
                }
            }
            return fail();
        }
        case FaultKind::pick_then_fold: {
            for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
                auto first = parse_action_line(lines[i]);
                auto second = parse_action_line(lines[i + 1]);
                if (first && second && first->verb == Verb::fold && second->verb == Verb::pick &&
                    first->name == second->name) {
                    std::vector<std::string> out = lines;
                    std::swap(out[i], out[i + 1]);
                    return out;
                }
            }
            return fail();
        }
        case FaultKind::drop_place_after_bend: {
            for (std::size_t i = 0; i < lines.size(); ++i) {
                auto bend = parse_action_line(lines[i]);
                if (!bend || bend->verb != Verb::bend) continue;
                std::optional<std::size_t> pick_at, place_at;
                for (std::size_t j = i + 1; j < lines.size(); ++j) {
                    auto later = parse_action_line(lines[j]);
                    if (!later || later->name != bend->name) continue;
                    if (later->verb == Verb::pick && !pick_at) pick_at = j;
                    if (later->verb == Verb::place && !place_at) place_at = j;
                }
                if (!pick_at || !place_at) continue;
                std::vector<std::string> out;
                for (std::size_t t = 0; t < lines.size(); ++t) {
                    if (t != *pick_at && t != *place_at) out.push_back(lines[t]);
                }
                return out;
            }
            return fail();
        }
        case FaultKind::unknown_action_name: {
            if (lines.empty()) return fail();
            auto parsed = parse_action_line(lines.front());
            if (!parsed) return fail();
            std::vector<std::string> out = lines;
            out.front() = "wiggle " + parsed->name;
            return out;
        }
        case FaultKind::place_no_inbin_effect:
            break;
    }
    return fail();
}

}  // namespace

std::vector<std::string> inject_plan_fault(const std::vector<std::string>& lines, FaultKind k,
                                           const WorldState& context) {
    if (is_domain_fault(k)) throw InapplicableFault(to_string(k) + " is not a plan fault");
    bool applicable = false;
    auto out = apply_plan_fault(lines, k, context, &applicable);
    if (!applicable) throw InapplicableFault("plan admits no " + to_string(k) + " fault");
    return out;
}

bool plan_fault_applicable(const std::vector<std::string>& lines, FaultKind k,
                           const WorldState& context) {
    if (is_domain_fault(k)) return false;
    bool applicable = false;
    apply_plan_fault(lines, k, context, &applicable);
    return applicable;
}

}  // namespace probepack
