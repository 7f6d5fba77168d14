#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "probepack/adapters.hpp"
#include "probepack/vocabulary.hpp"

namespace probepack {

struct BatchConfig {
    int repeats = 10;
    int max_replans = 5;
    std::uint64_t seed = 0;
    int workers = 0;  // 0: hardware concurrency

    AdapterFamily planner_family = AdapterFamily::oracle;
    PlannerNoise planner_noise = PlannerNoise::paper();

    AdapterFamily probe_family = AdapterFamily::oracle;
    ProbeNoisePreset probe_preset = ProbeNoisePreset::robot_tree;

    bool alt_vocabulary = false;
    AuditOptions audit;
};

struct TrialResult {
    int instance_id = 0;  // 1-based corpus id
    int repeat = 0;
    bool feasible = true;
    std::string infeasible_reason;
    int success_iteration = 0;  // 0: never succeeded
    int iterations_used = 0;
    int probe_correct = 0;
    int probe_total = 0;
};

struct ObjectAccuracy {
    int correct = 0;
    int total = 0;

    double rate() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct BatchReport {
    std::vector<TrialResult> trials;
    int feasible_trials = 0;
    int infeasible_trials = 0;
    std::vector<int> infeasible_instances;  // 1-based, deduplicated
    // Cumulative success over feasible trials; index 0 is iteration 1.
    std::vector<double> success_by_iteration;
    std::map<std::string, ObjectAccuracy> probe_accuracy;

    std::string to_json_text() const;
    std::string to_csv_text() const;  // "iteration,success_rate"
};

// Runs repeats x corpus trials with per-trial derived seeds; the outcome is a
// pure function of (config, corpus), independent of worker count.
BatchReport run_batch(const BatchConfig& config,
                      const std::vector<std::vector<std::string>>& corpus);

// Random instances over the 14-name vocabulary: sizes uniform in
// [min_size, max_size], no instance containing or contained in another
// (existing ones included). Throws GenerationExhausted when the subset-free
// requirement cannot be met within the attempt budget.
std::vector<std::vector<std::string>> gen_instances(
    int count, int min_size, int max_size, std::uint64_t seed,
    const std::vector<std::vector<std::string>>& existing = {});

}  // namespace probepack
