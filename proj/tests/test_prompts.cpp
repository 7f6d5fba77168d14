#include <doctest.h>

#include <cctype>
#include <set>

#include "probepack/prompts.hpp"
#include "probepack/vocabulary.hpp"

using namespace probepack;

namespace {

ProblemInstance corpus_problem(int id_1based) {
    auto records = labeled_records_for_names(corpus38()[static_cast<std::size_t>(id_1based - 1)]);
    return build_problem("pack all the objects on the desk into the box",
                         make_initial_state(records));
}

bool is_hex(const std::string& s) {
    for (char c : s) {
        if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("prompt roles are distinct and the visual pair is flagged") {
    CHECK(all_prompt_roles().size() == 9);
    std::set<std::string> names;
    for (PromptRole r : all_prompt_roles()) names.insert(to_string(r));
    CHECK(names.size() == 9);
    CHECK(is_visual_role(PromptRole::detector));
    CHECK(is_visual_role(PromptRole::namer));
    CHECK_FALSE(is_visual_role(PromptRole::task_planner));
    CHECK_FALSE(is_visual_role(PromptRole::property_reasoner));
}

TEST_CASE("cache keys are stable content hashes") {
    PromptEnvelope a{PromptRole::detector, "sys", "user"};
    PromptEnvelope b{PromptRole::detector, "sys", "user"};
    CHECK(a.cache_key() == b.cache_key());
    CHECK(a.cache_key().size() == 16);
    CHECK(is_hex(a.cache_key()));

    PromptEnvelope c{PromptRole::namer, "sys", "user"};
    PromptEnvelope d{PromptRole::detector, "sys2", "user"};
    PromptEnvelope e{PromptRole::detector, "sys", "user2"};
    std::set<std::string> keys = {a.cache_key(), c.cache_key(), d.cache_key(), e.cache_key()};
    CHECK(keys.size() == 4);
}

TEST_CASE("answer frames strip down to the body") {
    CHECK(strip_answer_frame("---template start---\nrigid\n---template end---\n") == "rigid");
    CHECK(strip_answer_frame("preamble\n---template start---\na\nb\n---template end---\ntrailer") ==
          "a\nb");
    CHECK(strip_answer_frame("rigid") == "rigid");  // frame is optional
    CHECK(strip_answer_frame("  ---template start---  \n x \n  ---template end---") == " x ");
    CHECK(strip_answer_frame("```json\n{\"a\": 1}\n```") == "{\"a\": 1}");
    CHECK(strip_answer_frame("\n\n  \nrigid\n \n") == "rigid");
    CHECK(strip_answer_frame("") == "");
}

TEST_CASE("detector prompt and answer") {
    SceneSpec scene = scene_for_names(corpus38()[14]);
    PromptEnvelope env = render_detector_prompt(scene);
    CHECK(env.role == PromptRole::detector);
    CHECK(env.user.find("Top view, 6 segmented blobs:") != std::string::npos);
    CHECK(env.user.find("Side view, 6 segmented blobs:") != std::string::npos);
    CHECK(env.user.find("- blob 0: color=white, shape=cuboid, dimension=3D, centroid=(5.0, 5.0)") !=
          std::string::npos);
    CHECK(env.user.find(kTemplateStart) != std::string::npos);

    auto parsed = parse_detector_answer(canonical_detector_answer(scene));
    REQUIRE(parsed.size() == scene.top.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        CHECK(parsed[i].color == scene.top[i].color);
        CHECK(parsed[i].dimension == scene.top[i].dimension);
        CHECK(parsed[i].shape == scene.top[i].shape);
    }

    CHECK(parse_detector_answer("- red 3D cuboid\nblue 2D rectangle").size() == 2);
    CHECK_THROWS_AS(parse_detector_answer("red 3D"), ParseFailure);
    CHECK_THROWS_AS(parse_detector_answer("red 2D cuboid"), ParseFailure);  // cuboid is 3D
    CHECK_THROWS_AS(parse_detector_answer("red 3D blob"), ParseFailure);
    CHECK_THROWS_AS(parse_detector_answer("red 3D cuboid please"), ParseFailure);
    CHECK_THROWS_AS(parse_detector_answer(""), ParseFailure);
}

TEST_CASE("namer prompt and answer with look-alike repeats") {
    std::vector<VisualDescriptor> descriptors = {
        {"white", Dimension::d3, Shape::cylinder}, {"white", Dimension::d3, Shape::cylinder},
        {"yellow", Dimension::d2, Shape::rectangle}, {"white", Dimension::d3, Shape::cylinder},
        {"yellow", Dimension::d2, Shape::rectangle}};
    PromptEnvelope env = render_namer_prompt(descriptors);
    CHECK(env.role == PromptRole::namer);
    CHECK(env.user.find("- white 3D cylinder") != std::string::npos);

    auto names = parse_namer_answer(canonical_namer_answer(descriptors));
    CHECK(names == std::vector<std::string>{"white_3D_cylinder", "white_3D_cylinder_2",
                                            "yellow_2D_rectangle", "white_3D_cylinder_3",
                                            "yellow_2D_rectangle_2"});

    CHECK(parse_namer_answer("noise\nobject: red_3D_cuboid\nnoise") ==
          std::vector<std::string>{"red_3D_cuboid"});
    CHECK_THROWS_AS(parse_namer_answer("red_3D_cuboid"), ParseFailure);  // no object: line
    CHECK_THROWS_AS(parse_namer_answer("object: ball"), ParseFailure);
    CHECK_THROWS_AS(parse_namer_answer("object: "), ParseFailure);
}

TEST_CASE("property prompt and answer cover the whole decision tree") {
    ObjectRecord o;
    o.name = "black_1D_line";
    o.color = "black";
    o.dimension = Dimension::d1;
    o.shape = Shape::line;

    for (ProbeAction action : {ProbeAction::bend, ProbeAction::fold, ProbeAction::push}) {
        Dimension dim = action == ProbeAction::bend    ? Dimension::d1
                        : action == ProbeAction::fold  ? Dimension::d2
                                                       : Dimension::d3;
        for (Property truth : properties_for_dimension(dim)) {
            ObservationTriple obs = simulate_probe(truth, dim, action);
            Property parsed = parse_property_answer(canonical_property_answer(o, action, obs));
            CHECK(parsed == classify_property(obs, action));
            CHECK(parsed == truth);
        }
    }

    PromptEnvelope env = render_property_prompt(
        o, ProbeAction::bend, simulate_probe(Property::bendable, Dimension::d1, ProbeAction::bend));
    CHECK(env.role == PromptRole::property_reasoner);
    CHECK(env.user.find("Probe: bend") != std::string::npos);
    CHECK(env.user.find("Shape during the probe: deformed") != std::string::npos);
    CHECK(env.user.find("Shape after the probe: original") != std::string::npos);

    CHECK(parse_property_answer("  Rigid \n") == Property::rigid);
    CHECK_THROWS_AS(parse_property_answer("squishy"), ParseFailure);
    CHECK_THROWS_AS(parse_property_answer(""), ParseFailure);
}

TEST_CASE("predicate prompt and answer") {
    auto records = labeled_records_for_names(corpus38()[14]);
    PromptEnvelope env = render_predicate_prompt(records);
    CHECK(env.role == PromptRole::predicate_generator);
    CHECK(env.user.find("- 0: white_3D_cuboid (rigid)") != std::string::npos);

    PredicateSpec parsed = parse_predicate_answer(canonical_predicate_answer(records));
    PredicateSpec expected = generate_predicates(records);
    CHECK(parsed.property_predicates == expected.property_predicates);
    CHECK(parsed.state_predicates == expected.state_predicates);

    CHECK_THROWS_AS(parse_predicate_answer("not json"), ParseFailure);
    CHECK_THROWS_AS(parse_predicate_answer("{\"property_predicates\": []}"), ParseFailure);
}

TEST_CASE("action prompt and answer") {
    auto records = labeled_records_for_names(corpus38()[14]);
    PredicateSpec predicates = generate_predicates(records);
    PromptEnvelope env = render_action_prompt(predicates, ConstraintSet::all());
    CHECK(env.role == PromptRole::action_generator);
    CHECK(env.user.find("\"property_predicates\"") != std::string::npos);
    CHECK(env.user.find("- R1: ") != std::string::npos);

    DomainDescription parsed =
        parse_action_answer(canonical_action_answer(predicates, ConstraintSet::all()));
    DomainDescription expected = canonical_domain();
    CHECK(parsed.actions == expected.actions);
    CHECK(parsed.constraints == expected.constraints);

    ConstraintSet only_r1;
    only_r1.r2 = only_r1.r3 = only_r1.r4 = only_r1.r5 = false;
    DomainDescription ablated = parse_action_answer(canonical_action_answer(predicates, only_r1));
    CHECK(ablated.actions == generate_actions(only_r1).actions);

    CHECK_THROWS_AS(parse_action_answer("not json"), ParseFailure);
}

TEST_CASE("init prompt and answer") {
    auto records = labeled_records_for_names(corpus38()[14]);
    PromptEnvelope env = render_init_prompt(records);
    CHECK(env.role == PromptRole::init_describer);
    CHECK(env.user.find("probed properties") != std::string::npos);

    WorldState parsed = parse_init_answer(canonical_init_answer(records));
    CHECK(parsed == make_initial_state(records));

    SUBCASE("rows already in the bin become box members") {
        WorldState s = make_initial_state(records);
        s.objects[2].in_bin = true;
        s.box.members = {2};
        WorldState back = parse_init_answer(init_table_text(s));
        CHECK(back.objects[2].in_bin);
        CHECK(back.box.members == std::vector<int>{2});
    }

    SUBCASE("damaged tables are rejected") {
        CHECK_THROWS_AS(parse_init_answer("no table here"), ParseFailure);
        CHECK_THROWS_AS(parse_init_answer("| Index | Name | In Bin |\n| 0 | red_3D_cuboid | False |"),
                        ParseFailure);  // too few columns
        // two properties claimed at once
        CHECK_THROWS_AS(
            parse_init_answer(
                "| Index | Name | In Bin | Is Rigid | Is Bendable | Is Foldable | Is Compressible "
                "| Is Plastic |\n"
                "| 0 | red_3D_cuboid | False | True | True | False | False | False |"),
            ParseFailure);
        // no property at all
        CHECK_THROWS_AS(
            parse_init_answer(
                "| Index | Name | In Bin | Is Rigid | Is Bendable | Is Foldable | Is Compressible "
                "| Is Plastic |\n"
                "| 0 | red_3D_cuboid | False | False | False | False | False | False |"),
            ParseFailure);
        // not a True/False cell
        CHECK_THROWS_AS(
            parse_init_answer(
                "| Index | Name | In Bin | Is Rigid | Is Bendable | Is Foldable | Is Compressible "
                "| Is Plastic |\n"
                "| 0 | red_3D_cuboid | Maybe | True | False | False | False | False |"),
            ParseFailure);
        // name outside the grammar
        CHECK_THROWS_AS(
            parse_init_answer(
                "| Index | Name | In Bin | Is Rigid | Is Bendable | Is Foldable | Is Compressible "
                "| Is Plastic |\n"
                "| 0 | ball | False | True | False | False | False | False |"),
            ParseFailure);
    }
}

TEST_CASE("goal prompt and answer") {
    auto records = labeled_records_for_names(corpus38()[14]);
    const std::string instruction = "pack all the objects on the desk into the box";
    PromptEnvelope env = render_goal_prompt(records, instruction);
    CHECK(env.role == PromptRole::goal_describer);
    CHECK(env.user.find("Instruction: " + instruction) != std::string::npos);
    CHECK(env.user.find("(rigid)") == std::string::npos);  // properties are planner business

    GoalSpec parsed = parse_goal_answer(canonical_goal_answer(records, instruction));
    REQUIRE(parsed.rows.size() == records.size());
    for (std::size_t i = 0; i < parsed.rows.size(); ++i) {
        CHECK(parsed.rows[i].index == static_cast<int>(i));
        CHECK(parsed.rows[i].name == records[i].name);
        CHECK(parsed.rows[i].packed);
    }

    CHECK_THROWS_AS(canonical_goal_answer(records, "sort the objects by color"),
                    UnsupportedInstruction);
    CHECK_THROWS_AS(parse_goal_answer("nothing tabular"), ParseFailure);
}

TEST_CASE("planner prompt carries the domain and both tables") {
    ProblemInstance p = corpus_problem(15);
    DomainDescription d = canonical_domain();
    PromptEnvelope env = render_planner_prompt(d, p);
    CHECK(env.role == PromptRole::task_planner);
    CHECK(env.user.find("- pick(target): requires hand_empty, target_not_in_bin") !=
          std::string::npos);
    CHECK(env.user.find("a compressible box member when the target is plastic") !=
          std::string::npos);
    CHECK(env.user.find("| Index | Name") != std::string::npos);
    CHECK(env.user.find("| Packed |") != std::string::npos);
    CHECK(env.user.find("infeasible:") != std::string::npos);

    auto lines = parse_plan_answer(canonical_plan_answer(d, p));
    CHECK(lines == plan(d, p).lines);
}

TEST_CASE("plan answers tolerate the terminator and declare infeasibility") {
    ProblemInstance p18 = corpus_problem(18);
    DomainDescription d = canonical_domain();
    std::string declared = canonical_plan_answer(d, p18);
    auto lines = parse_plan_answer(declared);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].rfind("infeasible:", 0) == 0);
    CHECK(lines[0].find("no compressible object available") != std::string::npos);

    CHECK(parse_plan_answer("pick red_3D_cuboid\n\nplace red_3D_cuboid\n" +
                            std::string(kTranscriptTerminator)) ==
          std::vector<std::string>{"pick red_3D_cuboid", "place red_3D_cuboid"});
    CHECK_THROWS_AS(parse_plan_answer("grab red_3D_cuboid"), ParseFailure);
    CHECK_THROWS_AS(parse_plan_answer("pick the cuboid"), ParseFailure);
    CHECK_THROWS_AS(parse_plan_answer(""), ParseFailure);
}

TEST_CASE("replanner prompt replays the feedback") {
    ProblemInstance p = corpus_problem(15);
    DomainDescription faulty =
        inject_domain_fault(canonical_domain(), FaultKind::place_no_inbin_effect);
    ExecutionTranscript t =
        execute_plan_lines(faulty, p.s_init, plan(canonical_domain(), p).lines);
    ValidationReport report = validate(t, p, faulty.constraints);
    PlannerFeedback feedback = make_feedback(report, t);

    PromptEnvelope env = render_replanner_prompt(canonical_domain(), p, feedback);
    CHECK(env.role == PromptRole::replanner);
    CHECK(env.user.find("Previous attempt failed (semantic error at step 5)") !=
          std::string::npos);
    CHECK(env.user.find("- step 5: Cannot push yellow_3D_cuboid") != std::string::npos);
    CHECK(env.user.find("Execution transcript:") != std::string::npos);
    CHECK(env.user.find(kTranscriptTerminator) != std::string::npos);
    CHECK(env.user.find("goal not reached: 0 of 6") != std::string::npos);
}
