#include <doctest.h>

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "probepack/adapters.hpp"
#include "probepack/execution.hpp"
#include "probepack/rng.hpp"
#include "probepack/vocabulary.hpp"

using namespace probepack;

namespace {

std::string fixture(const std::string& rel) {
    return std::string(PROBEPACK_FIXTURE_DIR) + "/" + rel;
}

ProblemInstance corpus_problem(int id_1based) {
    auto records = labeled_records_for_names(corpus38()[static_cast<std::size_t>(id_1based - 1)]);
    return build_problem("pack all the objects on the desk into the box",
                         make_initial_state(records));
}

// Transcripts that permute whole pick/place/push triples of compressible
// objects describe the same packing; normalize by sorting each maximal run of
// such triples by object name.
std::vector<std::string> normalize_compressible_blocks(const std::vector<std::string>& lines) {
    struct Triple {
        std::string name;
        std::array<std::string, 3> lines;
    };
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < lines.size()) {
        std::vector<Triple> run;
        while (i + 2 < lines.size()) {
            std::istringstream a(lines[i]), b(lines[i + 1]), c(lines[i + 2]);
            std::string va, na, vb, nb, vc, nc;
            a >> va >> na;
            b >> vb >> nb;
            c >> vc >> nc;
            if (va != "pick" || vb != "place" || vc != "push" || na != nb || nb != nc) break;
            run.push_back({na, {lines[i], lines[i + 1], lines[i + 2]}});
            i += 3;
        }
        if (!run.empty()) {
            std::sort(run.begin(), run.end(),
                      [](const Triple& x, const Triple& y) { return x.name < y.name; });
            for (const auto& t : run) {
                for (const auto& line : t.lines) out.push_back(line);
            }
            continue;
        }
        out.push_back(lines[i++]);
    }
    return out;
}

oracles::PropertyMap property_letters(const WorldState& s) {
    oracles::PropertyMap m;
    for (const auto& o : s.objects) {
        switch (o.property.value_or(Property::rigid)) {
            case Property::rigid: m[o.name] = 'R'; break;
            case Property::bendable: m[o.name] = 'B'; break;
            case Property::foldable: m[o.name] = 'F'; break;
            case Property::compressible: m[o.name] = 'C'; break;
            case Property::plastic: m[o.name] = 'P'; break;
        }
    }
    return m;
}

std::vector<oracles::TraceStep> trace_of(const ExecutionTranscript& t) {
    std::vector<oracles::TraceStep> steps;
    for (const auto& s : t.steps) {
        steps.push_back({to_string(s.action.verb), t.states.front().object(s.action.object).name,
                         s.ok});
    }
    return steps;
}

}  // namespace

TEST_CASE("forgotten in_bin effect reproduces the published failure transcript") {
    ProblemInstance p = corpus_problem(15);
    DomainDescription faulty =
        inject_domain_fault(canonical_domain(), FaultKind::place_no_inbin_effect);
    PlanningResult r = plan(canonical_domain(), p);
    REQUIRE(r.plan.has_value());

    ExecutionTranscript t = execute_plan_lines(faulty, p.s_init, r.lines);
    CHECK(t.text() == read_text_file(fixture("transcripts/instance15_faulty.txt")));
    CHECK(t.terminated);
    CHECK(t.cannot_count() == 3);

    ValidationReport report = validate(t, p, faulty.constraints);
    CHECK(report.error_class == ErrorClass::semantic);
    CHECK_FALSE(report.goal_reached);
    CHECK_FALSE(report.case_two);
    CHECK(report.failed_step == 5);  // the first blocked push
    std::set<Rule> rules;
    for (const auto& v : report.violations) rules.insert(v.rule);
    CHECK(rules == std::set<Rule>{Rule::r2});  // every compressible place goes unpushed
    CHECK(report.violations.size() == 3);
    bool goal_line = false;
    for (const auto& m : report.messages) {
        if (m.find("goal not reached: 0 of 6") != std::string::npos) goal_line = true;
    }
    CHECK(goal_line);
}

TEST_CASE("clean run matches the published success transcript") {
    ProblemInstance p = corpus_problem(15);
    DomainDescription d = canonical_domain();
    PlanningResult r = plan(d, p);
    ExecutionTranscript t = execute_plan_lines(d, p.s_init, r.lines);
    CHECK(t.text() == read_text_file(fixture("transcripts/instance15_success.txt")));

    ValidationReport report = validate(t, p, d.constraints);
    CHECK(report.success());
    CHECK(report.messages == std::vector<std::string>{kValidatorSuccessMessage});
    CHECK(report.cannot_count == 0);
    CHECK_FALSE(report.failed_step.has_value());
}

TEST_CASE("the alternate compressible ordering is the same packing") {
    auto ours = split_lines(read_text_file(fixture("transcripts/instance15_success.txt")));
    auto alt = split_lines(read_text_file(fixture("transcripts/instance15_success_alt_order.txt")));
    CHECK(ours != alt);  // the fixtures really differ...
    CHECK(normalize_compressible_blocks(ours) == normalize_compressible_blocks(alt));

    // ...and both run clean to the goal
    ProblemInstance p = corpus_problem(15);
    DomainDescription d = canonical_domain();
    for (const auto* lines : {&ours, &alt}) {
        auto body = *lines;
        REQUIRE(body.back() == kTranscriptTerminator);
        body.pop_back();
        ExecutionTranscript t = execute_plan_lines(d, p.s_init, body);
        CHECK(t.cannot_count() == 0);
        CHECK(validate(t, p, d.constraints).success());
    }
}

TEST_CASE("packing plastics with no compressible hits the guard and cascades") {
    ProblemInstance p = corpus_problem(18);
    DomainDescription d = canonical_domain();
    // pick/place in instance order, ignoring the admission rule
    std::vector<std::string> naive;
    for (const auto& o : p.s_init.objects) {
        naive.push_back("pick " + o.name);
        naive.push_back("place " + o.name);
    }
    ExecutionTranscript t = execute_plan_lines(d, p.s_init, naive);
    CHECK(t.text() == read_text_file(fixture("transcripts/instance18_failure.txt")));
    CHECK(t.cannot_count() == 3);

    ValidationReport report = validate(t, p, d.constraints);
    CHECK(report.error_class == ErrorClass::semantic);
    CHECK_FALSE(report.goal_reached);
    // R1 flags both blocked place attempts, one per plastic object
    REQUIRE(report.violations.size() == 2);
    CHECK(report.violations[0].rule == Rule::r1);
    CHECK(report.violations[0].step == 5);
    CHECK(report.violations[1].rule == Rule::r1);
    CHECK(report.violations[1].step == 7);
    CHECK(report.failed_step == 5);
}

TEST_CASE("plan fault outcomes") {
    ProblemInstance p15 = corpus_problem(15);
    DomainDescription d = canonical_domain();
    PlanningResult base15 = plan(d, p15);

    SUBCASE("dropping the pushes leaves the goal reached but the rule broken") {
        auto lines = inject_plan_fault(base15.lines, FaultKind::drop_push, p15.s_init);
        CHECK(lines.size() == base15.lines.size() - 3);
        ExecutionTranscript t = execute_plan_lines(d, p15.s_init, lines);
        CHECK(t.cannot_count() == 0);
        ValidationReport report = validate(t, p15, d.constraints);
        CHECK(report.error_class == ErrorClass::semantic);
        CHECK(report.goal_reached);  // everything is in the box, just not admissibly
        CHECK_FALSE(report.case_two);
        CHECK(report.violations.size() == 3);
        for (const auto& v : report.violations) CHECK(v.rule == Rule::r2);
    }

    SUBCASE("packing the plastic first trips the guard and wedges the hand") {
        auto lines = inject_plan_fault(base15.lines, FaultKind::swap_plastic_first, p15.s_init);
        CHECK(lines[0] == "pick blue_2D_rectangle");
        CHECK(lines[1] == "place blue_2D_rectangle");
        ExecutionTranscript t = execute_plan_lines(d, p15.s_init, lines);
        // the blocked place leaves the hand full, so every later step fails too
        CHECK(t.cannot_count() == static_cast<int>(lines.size()) - 1);
        ValidationReport report = validate(t, p15, d.constraints);
        CHECK(report.error_class == ErrorClass::semantic);
        CHECK(report.failed_step == 1);
        REQUIRE_FALSE(report.violations.empty());
        CHECK(report.violations[0].rule == Rule::r1);
        CHECK(report.violations[0].step == 1);
    }

    SUBCASE("picking before folding sneaks an unfolded object into the box") {
        ProblemInstance p4 = corpus_problem(4);  // has a foldable rectangle
        PlanningResult base4 = plan(d, p4);
        auto lines = inject_plan_fault(base4.lines, FaultKind::pick_then_fold, p4.s_init);
        CHECK(lines[0] == "pick yellow_2D_rectangle");
        CHECK(lines[1] == "fold yellow_2D_rectangle");
        ExecutionTranscript t = execute_plan_lines(d, p4.s_init, lines);
        CHECK(t.cannot_count() == 1);  // only the late fold is blocked
        ValidationReport report = validate(t, p4, d.constraints);
        CHECK(report.error_class == ErrorClass::semantic);
        CHECK(report.goal_reached);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].rule == Rule::r4);
        CHECK(report.violations[0].step == 2);  // the successful unfolded place
    }

    SUBCASE("bending an object and forgetting it is a clean miss") {
        auto lines =
            inject_plan_fault(base15.lines, FaultKind::drop_place_after_bend, p15.s_init);
        CHECK(lines.size() == base15.lines.size() - 2);
        ExecutionTranscript t = execute_plan_lines(d, p15.s_init, lines);
        CHECK(t.cannot_count() == 0);
        ValidationReport report = validate(t, p15, d.constraints);
        CHECK(report.error_class == ErrorClass::semantic);
        CHECK(report.case_two);  // no step failed, no rule broke, goal still missed
        CHECK(report.violations.empty());
        bool goal_line = false;
        for (const auto& m : report.messages) {
            if (m.find("goal not reached: 5 of 6") != std::string::npos) goal_line = true;
        }
        CHECK(goal_line);
    }

    SUBCASE("an unknown verb truncates the transcript before the terminator") {
        auto lines = inject_plan_fault(base15.lines, FaultKind::unknown_action_name, p15.s_init);
        CHECK(lines[0] == "wiggle black_1D_line");
        ExecutionTranscript t = execute_plan_lines(d, p15.s_init, lines);
        CHECK_FALSE(t.terminated);
        CHECK(t.syntax_error_step == 0);
        CHECK(t.steps.empty());
        ValidationReport report = validate(t, p15, d.constraints);
        CHECK(report.error_class == ErrorClass::syntax);
        CHECK(report.failed_step == 0);
        CHECK_FALSE(report.goal_reached);
    }

    SUBCASE("faults that need a missing site refuse to apply") {
        CHECK_THROWS_AS(inject_plan_fault(base15.lines, FaultKind::pick_then_fold, p15.s_init),
                        InapplicableFault);
        CHECK_THROWS_AS(
            inject_plan_fault(base15.lines, FaultKind::place_no_inbin_effect, p15.s_init),
            InapplicableFault);
        CHECK_THROWS_AS(inject_domain_fault(d, FaultKind::drop_push), InapplicableFault);
        CHECK_FALSE(plan_fault_applicable(base15.lines, FaultKind::pick_then_fold, p15.s_init));
        CHECK(plan_fault_applicable(base15.lines, FaultKind::drop_push, p15.s_init));
    }
}

TEST_CASE("strict push ordering only matters when another place intervenes") {
    ProblemInstance p = corpus_problem(15);
    DomainDescription d = canonical_domain();
    std::vector<std::string> lines = {
        "pick yellow_3D_cuboid", "place yellow_3D_cuboid", "pick white_3D_cuboid",
        "place white_3D_cuboid", "push yellow_3D_cuboid",
    };
    ExecutionTranscript t = execute_plan_lines(d, p.s_init, lines);
    CHECK(t.cannot_count() == 0);

    auto weak = audit_constraints(t, d.constraints);
    CHECK(weak.empty());

    auto strict = audit_constraints(t, d.constraints, {.strict_r2 = true});
    REQUIRE(strict.size() == 1);
    CHECK(strict[0].rule == Rule::r2);
    CHECK(strict[0].step == 1);
}

TEST_CASE("transcript text parses back to the same step sequence") {
    ProblemInstance p = corpus_problem(15);
    DomainDescription faulty =
        inject_domain_fault(canonical_domain(), FaultKind::place_no_inbin_effect);
    ExecutionTranscript t =
        execute_plan_lines(faulty, p.s_init, plan(canonical_domain(), p).lines);

    ParsedTranscript parsed = parse_transcript(t.text());
    CHECK(parsed.terminated);
    REQUIRE(parsed.entries.size() == t.steps.size());
    for (std::size_t i = 0; i < parsed.entries.size(); ++i) {
        CHECK(parsed.entries[i].verb == t.steps[i].action.verb);
        CHECK(parsed.entries[i].name == p.s_init.object(t.steps[i].action.object).name);
        CHECK(parsed.entries[i].ok == t.steps[i].ok);
    }
    CHECK_FALSE(parsed.entries[5].ok);

    CHECK_FALSE(parse_transcript("pick white_3D_cuboid\n").terminated);
    CHECK_THROWS_AS(parse_transcript(std::string(kTranscriptTerminator) + "\npick x"),
                    ParseFailure);
    CHECK_THROWS_AS(parse_transcript("wiggle white_3D_cuboid"), ParseFailure);
    CHECK_THROWS_AS(parse_transcript("pick ball"), ParseFailure);
    CHECK_THROWS_AS(parse_transcript("pick"), ParseFailure);
    CHECK_THROWS_AS(parse_transcript("pick white_3D_cuboid now"), ParseFailure);
}

TEST_CASE("audit agrees with an independent trace replay") {
    // Every fault kind, on an instance where it applies, must produce exactly
    // the rule set a from-scratch replay of the transcript text flags.
    DomainDescription d = canonical_domain();
    for (int id : {4, 15, 23}) {
        ProblemInstance p = corpus_problem(id);
        PlanningResult base = plan(d, p);
        std::vector<std::vector<std::string>> candidates = {base.lines};
        for (FaultKind k : all_fault_kinds()) {
            if (is_domain_fault(k)) continue;
            if (k == FaultKind::unknown_action_name) continue;  // never executes
            if (!plan_fault_applicable(base.lines, k, p.s_init)) continue;
            candidates.push_back(inject_plan_fault(base.lines, k, p.s_init));
        }
        for (const auto& lines : candidates) {
            ExecutionTranscript t = execute_plan_lines(d, p.s_init, lines);
            std::set<int> expected = oracles::violated_rules(trace_of(t), property_letters(p.s_init));
            std::set<int> got;
            for (const auto& v : audit_constraints(t, d.constraints)) {
                got.insert(static_cast<int>(v.rule) + 1);
            }
            CHECK_MESSAGE(got == expected, "instance ", id, " plan of ", lines.size(), " steps");
        }
    }
}

TEST_CASE("failed steps leave the state untouched") {
    ProblemInstance p = corpus_problem(15);
    DomainDescription d = canonical_domain();
    WorldState s = p.s_init;
    std::uint64_t before = fingerprint(s);
    StepResult r = apply_step(d, s, {Verb::place, 0, 0});  // not holding it
    CHECK_FALSE(r.ok);
    CHECK(r.line == "Cannot place white_3D_cuboid");
    CHECK(fingerprint(s) == before);
    CHECK(s == p.s_init);
}

TEST_CASE("random plans keep every intermediate state well formed") {
    ProblemInstance p = corpus_problem(15);
    DomainDescription d = canonical_domain();
    Rng rng(derive_seed(99, "hammer"));
    for (int trial = 0; trial < 300; ++trial) {
        Plan plan;
        int steps = static_cast<int>(rng.uniform_int(1, 24));
        for (int i = 0; i < steps; ++i) {
            plan.steps.push_back({rng.pick(all_verbs()),
                                  static_cast<int>(rng.index(p.s_init.objects.size())), 0});
        }
        ExecutionTranscript t = execute_plan(d, p.s_init, plan);
        REQUIRE(t.states.size() == plan.steps.size() + 1);
        for (const auto& s : t.states) {
            CHECK_NOTHROW(validate_world_strict(s));
        }
        for (std::size_t i = 0; i < t.steps.size(); ++i) {
            if (!t.steps[i].ok) {
                CHECK(fingerprint(t.states[i]) == fingerprint(t.states[i + 1]));
            }
        }
    }
}

TEST_CASE("goal check reads the in_bin flags") {
    ProblemInstance p = corpus_problem(15);
    CHECK_FALSE(goal_satisfied(p.goal, p.s_init));
    WorldState s = p.s_init;
    for (auto& o : s.objects) o.in_bin = true;
    CHECK(goal_satisfied(p.goal, s));
    s.objects[3].in_bin = false;
    CHECK_FALSE(goal_satisfied(p.goal, s));

    GoalSpec missing;
    missing.rows.push_back({0, "green_3D_cylinder", true});
    CHECK_FALSE(goal_satisfied(missing, s));
}

TEST_CASE("feedback carries the validator messages and the transcript") {
    ProblemInstance p = corpus_problem(15);
    DomainDescription faulty =
        inject_domain_fault(canonical_domain(), FaultKind::place_no_inbin_effect);
    ExecutionTranscript t =
        execute_plan_lines(faulty, p.s_init, plan(canonical_domain(), p).lines);
    ValidationReport report = validate(t, p, faulty.constraints);
    PlannerFeedback f = make_feedback(report, t);
    CHECK(f.error_class == ErrorClass::semantic);
    CHECK(f.failed_step == report.failed_step);
    CHECK(f.messages == report.messages);
    CHECK(f.transcript_text == t.text());
}

TEST_CASE("the plan and repair loop") {
    ProblemInstance p = corpus_problem(15);
    OraclePlanner oracle;

    SUBCASE("a sound domain succeeds on the first attempt") {
        LoopOutcome out = validate_loop(oracle, canonical_domain(), p, 0, 7);
        CHECK(out.success);
        CHECK(out.success_iteration() == 1);
        CHECK(out.iterations_used == 1);
        CHECK(out.iterations[0].validation.success());
    }

    SUBCASE("a defective domain is repaired on the second attempt") {
        DomainDescription faulty =
            inject_domain_fault(canonical_domain(), FaultKind::place_no_inbin_effect);
        LoopOutcome out = validate_loop(oracle, faulty, p, 3, 7);
        CHECK(out.success);
        CHECK(out.success_iteration() == 2);
        CHECK(out.iterations[0].validation.error_class == ErrorClass::semantic);
        CHECK(out.iterations[1].validation.success());
    }

    SUBCASE("no replanning budget means the defect is terminal") {
        DomainDescription faulty =
            inject_domain_fault(canonical_domain(), FaultKind::place_no_inbin_effect);
        LoopOutcome out = validate_loop(oracle, faulty, p, 0, 7);
        CHECK_FALSE(out.success);
        CHECK(out.success_iteration() == 0);
        CHECK(out.iterations_used == 1);
    }

    SUBCASE("an infeasible instance short-circuits before planning") {
        LoopOutcome out = validate_loop(oracle, canonical_domain(), corpus_problem(18), 5, 7);
        CHECK_FALSE(out.success);
        REQUIRE(out.infeasible_reason.has_value());
        CHECK(out.iterations.empty());
    }

    SUBCASE("a negative budget is rejected") {
        CHECK_THROWS_AS(validate_loop(oracle, canonical_domain(), p, -1, 7), Error);
    }
}
