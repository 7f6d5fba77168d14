// Command line front end: probe properties, synthesize plans, validate them,
// run the full discover-plan-validate loop, and drive batch studies.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "probepack/adapters.hpp"
#include "probepack/batch.hpp"
#include "probepack/planner.hpp"
#include "probepack/rng.hpp"
#include "probepack/vocabulary.hpp"

namespace {

using namespace probepack;

constexpr int kExitOk = 0;
constexpr int kExitFile = 1;
constexpr int kExitAdapter = 2;
constexpr int kExitConflict = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitBudget = 5;

struct CommonOptions {
    std::string family = "oracle";
    std::uint64_t seed = 0;
    std::string endpoint;
    std::string api_key;
    std::string model = "desk-llm";
    std::string record_dir;
    std::string replay_dir;
    std::string assist = "none";
    double p_miss = 0.0184;
    double p_hall = 0.0053;
    std::string probe_preset = "robot_tree";
    bool alt_vocab = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--adapter", o.family, "adapter family: oracle, noisy, remote, replay");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--endpoint", o.endpoint, "chat-completions endpoint for --adapter remote");
    cmd->add_option("--api-key", o.api_key, "bearer token for the endpoint");
    cmd->add_option("--model", o.model, "model name sent to the endpoint");
    cmd->add_option("--record-dir", o.record_dir, "directory to record remote exchanges into");
    cmd->add_option("--replay-dir", o.replay_dir, "recorded exchanges for --adapter replay");
    cmd->add_option("--assist", o.assist, "detection assist: none, bounding_box, graph, both");
    cmd->add_option("--p-miss", o.p_miss, "chance a scene drops one object");
    cmd->add_option("--p-hall", o.p_hall, "chance a scene gains a phantom object");
    cmd->add_option("--probe-preset", o.probe_preset, "probe noise preset: robot, robot_tree");
    cmd->add_flag("--alt-vocab", o.alt_vocab, "swap the two ambiguous 1D line properties");
}

AdapterConfig to_config(const CommonOptions& o) {
    AdapterConfig config;
    auto family = parse_adapter_family(o.family);
    if (!family) throw Error("unknown adapter family: " + o.family);
    config.family = *family;
    config.seed = o.seed;
    config.endpoint = o.endpoint;
    config.api_key = o.api_key;
    config.model = o.model;
    config.record_dir = o.record_dir;
    config.replay_dir = o.replay_dir;
    auto assist = parse_detection_assist(o.assist);
    if (!assist) throw Error("unknown detection assist: " + o.assist);
    config.detection.assist = *assist;
    config.detection.p_miss = o.p_miss;
    config.detection.p_hall = o.p_hall;
    auto preset = parse_probe_preset(o.probe_preset);
    if (!preset) throw Error("unknown probe preset: " + o.probe_preset);
    config.probe_preset = preset.value();
    return config;
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item =
            comma == std::string::npos ? text.substr(pos) : text.substr(pos, comma - pos);
        std::size_t b = item.find_first_not_of(" \t");
        std::size_t e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

struct TargetOptions {
    int instance = 0;  // 1-based id into the builtin corpus
    std::string names;
    std::string scene_path;
};

void add_target(CLI::App* cmd, TargetOptions& t, bool with_scene) {
    cmd->add_option("--instance", t.instance, "1-based id into the builtin task corpus");
    cmd->add_option("--names", t.names, "comma separated object names");
    if (with_scene) cmd->add_option("--scene", t.scene_path, "scene json with two camera views");
}

std::vector<std::string> resolve_names(const TargetOptions& t) {
    if (!t.names.empty()) return split_csv(t.names);
    if (t.instance >= 1 && t.instance <= static_cast<int>(corpus38().size()))
        return corpus38()[static_cast<std::size_t>(t.instance - 1)];
    throw Error("pick a target with --instance (1.." + std::to_string(corpus38().size()) +
                ") or --names");
}

SceneSpec resolve_scene(const TargetOptions& t, bool alt) {
    if (!t.scene_path.empty()) return load_scene(t.scene_path);
    return scene_for_names(resolve_names(t), alt);
}

const char* kInstruction = "pack all the objects on the desk into the box";

int cmd_probe(const CommonOptions& common, const TargetOptions& target,
              const std::string& kb_path, const std::string& out_path) {
    AdapterConfig config = to_config(common);
    AdapterSet adapters = make_adapters(config);

    SceneSpec scene = resolve_scene(target, common.alt_vocab);
    DetectionResult detection =
        detect_objects(scene, *adapters.perception, derive_seed(config.seed, "scene"));

    KnowledgeBase kb;
    if (!kb_path.empty() && std::filesystem::exists(kb_path)) kb = KnowledgeBase::load(kb_path);

    ProbeRunReport report = probe_missing(detection.records, scene.ground_truth, kb,
                                          *adapters.property, derive_seed(config.seed, "probe"));
    std::cout << report.log_text();
    std::cout << report.probed_count << " probed, " << report.skipped_known
              << " already known\n";
    const std::string save_to = out_path.empty() ? kb_path : out_path;
    if (!save_to.empty()) kb.save(save_to);
    return kExitOk;
}

int cmd_plan(const CommonOptions& common, const TargetOptions& target,
             const std::string& kb_path, const std::string& out_path) {
    AdapterConfig config = to_config(common);
    AdapterSet adapters = make_adapters(config);

    auto records = records_for_names(resolve_names(target));
    KnowledgeBase kb;
    if (!kb_path.empty() && std::filesystem::exists(kb_path)) kb = KnowledgeBase::load(kb_path);
    probe_missing(records, vocabulary_truth(common.alt_vocab), kb, *adapters.property,
                  derive_seed(config.seed, "probe"));

    ProblemInstance problem = build_problem(kInstruction, make_initial_state(records));
    PlanningResult result =
        adapters.planner->plan(canonical_domain(), problem, derive_seed(config.seed, "plan"));
    if (result.infeasible_reason) {
        std::cerr << "infeasible: " << *result.infeasible_reason << '\n';
        return kExitInfeasible;
    }
    const std::string text = join_lines(result.lines) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
    return kExitOk;
}

int cmd_validate(const CommonOptions& common, const TargetOptions& target,
                 const std::string& plan_path) {
    auto records = labeled_records_for_names(resolve_names(target), common.alt_vocab);
    ProblemInstance problem = build_problem(kInstruction, make_initial_state(records));

    std::vector<std::string> lines = split_lines(read_text_file(plan_path));
    std::vector<std::string> plan_lines;
    for (auto& l : lines) {
        if (!l.empty()) plan_lines.push_back(l);
    }

    DomainDescription domain = canonical_domain();
    ExecutionTranscript transcript = execute_plan_lines(domain, problem.s_init, plan_lines);
    ValidationReport report = validate(transcript, problem, domain.constraints);

    std::cout << transcript.text();
    if (report.success()) {
        std::cout << kValidatorSuccessMessage << '\n';
        return kExitOk;
    }
    for (const auto& m : report.messages) std::cout << m << '\n';
    return kExitBudget;
}

int cmd_run(const CommonOptions& common, const TargetOptions& target, int max_replans,
            const std::string& kb_path, bool show_transcript) {
    AdapterConfig config = to_config(common);
    AdapterSet adapters = make_adapters(config);

    SceneSpec scene = resolve_scene(target, common.alt_vocab);
    DetectionResult detection =
        detect_objects(scene, *adapters.perception, derive_seed(config.seed, "scene"));

    KnowledgeBase kb;
    if (!kb_path.empty() && std::filesystem::exists(kb_path)) kb = KnowledgeBase::load(kb_path);
    ProbeRunReport probe_report =
        probe_missing(detection.records, scene.ground_truth, kb, *adapters.property,
                      derive_seed(config.seed, "probe"));
    std::cout << probe_report.log_text();
    if (!kb_path.empty()) kb.save(kb_path);

    ProblemInstance problem = build_problem(kInstruction, make_initial_state(detection.records));
    LoopOutcome outcome = validate_loop(*adapters.planner, canonical_domain(), problem,
                                        max_replans, derive_seed(config.seed, "loop"));
    if (outcome.infeasible_reason) {
        std::cerr << "infeasible: " << *outcome.infeasible_reason << '\n';
        return kExitInfeasible;
    }
    if (show_transcript && !outcome.iterations.empty())
        std::cout << outcome.iterations.back().transcript.text();
    if (outcome.success) {
        std::cout << kValidatorSuccessMessage << '\n';
        std::cout << "succeeded at iteration " << outcome.success_iteration() << " of "
                  << outcome.iterations_used << '\n';
        return kExitOk;
    }
    for (const auto& m : outcome.iterations.back().validation.messages) std::cout << m << '\n';
    std::cout << "no valid plan within " << max_replans << " replans\n";
    return kExitBudget;
}

int cmd_batch(const CommonOptions& common, int repeats, int max_replans, int workers,
              const std::string& planner_family, const std::string& probe_family,
              const std::string& corpus_path, const std::string& json_path,
              const std::string& csv_path) {
    BatchConfig config;
    config.repeats = repeats;
    config.max_replans = max_replans;
    config.seed = common.seed;
    config.workers = workers;
    config.alt_vocabulary = common.alt_vocab;
    auto planner = parse_adapter_family(planner_family);
    auto probe = parse_adapter_family(probe_family);
    if (!planner || !probe) throw Error("batch families must be oracle or noisy");
    config.planner_family = *planner;
    config.probe_family = *probe;
    auto preset = parse_probe_preset(common.probe_preset);
    if (!preset) throw Error("unknown probe preset: " + common.probe_preset);
    config.probe_preset = *preset;

    std::vector<std::vector<std::string>> corpus =
        corpus_path.empty() ? corpus38() : corpus_from_json_text(read_text_file(corpus_path));

    BatchReport report = run_batch(config, corpus);
    if (!json_path.empty()) write_text_file(json_path, report.to_json_text());
    if (!csv_path.empty()) write_text_file(csv_path, report.to_csv_text());

    std::cout << report.feasible_trials << " feasible trials, " << report.infeasible_trials
              << " infeasible";
    if (!report.infeasible_instances.empty()) {
        std::cout << " (instances";
        for (int id : report.infeasible_instances) std::cout << ' ' << id;
        std::cout << ')';
    }
    std::cout << '\n';
    for (std::size_t k = 0; k < report.success_by_iteration.size(); ++k) {
        std::printf("iteration %zu: %.2f%%\n", k + 1, 100.0 * report.success_by_iteration[k]);
    }
    return kExitOk;
}

int cmd_gen(const CommonOptions& common, int count, int min_size, int max_size, bool fresh,
            const std::string& out_path) {
    auto existing = fresh ? std::vector<std::vector<std::string>>{} : corpus38();
    auto instances = gen_instances(count, min_size, max_size, common.seed, existing);
    const std::string text = corpus_to_json_text(instances);
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale property discovery and packing-plan validation bench"};
    app.require_subcommand(1);

    CommonOptions common;
    TargetOptions target;
    std::string kb_path, out_path, plan_path, corpus_path, json_path, csv_path;
    int max_replans = 5, repeats = 10, workers = 0;
    int gen_count = 10, gen_min = 3, gen_max = 7;
    bool show_transcript = false, gen_fresh = false;
    std::string planner_family = "oracle", probe_family = "oracle";

    auto* probe = app.add_subcommand("probe", "discover properties by probing unknown objects");
    add_common(probe, common);
    add_target(probe, target, true);
    probe->add_option("--kb", kb_path, "knowledge base json to read and update");
    probe->add_option("--out", out_path, "write the updated knowledge base here instead");

    auto* plan = app.add_subcommand("plan", "emit a packing plan for a task instance");
    add_common(plan, common);
    add_target(plan, target, false);
    plan->add_option("--kb", kb_path, "knowledge base json with known properties");
    plan->add_option("--out", out_path, "write the plan here instead of stdout");

    auto* validate = app.add_subcommand("validate", "execute a plan file and audit the rules");
    add_common(validate, common);
    add_target(validate, target, false);
    validate->add_option("--plan", plan_path, "plan file, one action per line")->required();

    auto* run = app.add_subcommand("run", "probe, plan, validate and replan until clean");
    add_common(run, common);
    add_target(run, target, true);
    run->add_option("--max-replans", max_replans, "replanning budget after the first attempt");
    run->add_option("--kb", kb_path, "knowledge base json to read and update");
    run->add_flag("--transcript", show_transcript, "print the final execution transcript");

    auto* batch = app.add_subcommand("batch", "run repeated trials over a task corpus");
    add_common(batch, common);
    batch->add_option("--repeats", repeats, "trials per instance");
    batch->add_option("--max-replans", max_replans, "replanning budget per trial");
    batch->add_option("--workers", workers, "worker threads (0: hardware)");
    batch->add_option("--planner-family", planner_family, "oracle or noisy");
    batch->add_option("--probe-family", probe_family, "oracle or noisy");
    batch->add_option("--corpus", corpus_path, "corpus json (defaults to the builtin 38)");
    batch->add_option("--json", json_path, "write the full report here");
    batch->add_option("--csv", csv_path, "write the success curve here");

    auto* gen = app.add_subcommand("gen-instances", "sample fresh subset-free task instances");
    add_common(gen, common);
    gen->add_option("--count", gen_count, "instances to generate");
    gen->add_option("--min-size", gen_min, "smallest instance size");
    gen->add_option("--max-size", gen_max, "largest instance size");
    gen->add_flag("--fresh", gen_fresh, "ignore the builtin corpus when avoiding overlaps");
    gen->add_option("--out", out_path, "write the corpus json here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (probe->parsed()) return cmd_probe(common, target, kb_path, out_path);
        if (plan->parsed()) return cmd_plan(common, target, kb_path, out_path);
        if (validate->parsed()) return cmd_validate(common, target, plan_path);
        if (run->parsed())
            return cmd_run(common, target, max_replans, kb_path, show_transcript);
        if (batch->parsed())
            return cmd_batch(common, repeats, max_replans, workers, planner_family, probe_family,
                             corpus_path, json_path, csv_path);
        if (gen->parsed())
            return cmd_gen(common, gen_count, gen_min, gen_max, gen_fresh, out_path);
    } catch (const PropertyConflict& e) {
        std::cerr << "knowledge base conflict: " << e.what() << '\n';
        return kExitConflict;
    } catch (const AdapterFailure& e) {
        std::cerr << "adapter failure: " << e.what() << '\n';
        return kExitAdapter;
    } catch (const ReplayMiss& e) {
        std::cerr << "replay miss: " << e.what() << '\n';
        return kExitAdapter;
    } catch (const FileError& e) {
        std::cerr << "file error: " << e.what() << '\n';
        return kExitFile;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFile;
    }
    return kExitOk;
}
