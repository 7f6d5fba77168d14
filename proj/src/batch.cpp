#include "probepack/batch.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "probepack/planner.hpp"
#include "probepack/rng.hpp"

namespace probepack {

namespace {

std::unique_ptr<PropertyAdapter> make_property_adapter(const BatchConfig& config) {
    if (config.probe_family == AdapterFamily::noisy)
        return std::make_unique<NoisyProperty>(config.probe_preset);
    return std::make_unique<OracleProperty>();
}

std::unique_ptr<PlannerAdapter> make_planner_adapter(const BatchConfig& config) {
    if (config.planner_family == AdapterFamily::noisy)
        return std::make_unique<NoisyPlanner>(config.planner_noise);
    return std::make_unique<OraclePlanner>();
}

struct TrialOutput {
    TrialResult result;
    std::vector<std::pair<std::string, bool>> probe_hits;  // name, classified correctly
};

TrialOutput run_trial(const BatchConfig& config, const std::vector<std::string>& names,
                      int instance_id, int repeat, std::uint64_t trial_seed) {
    TrialOutput out;
    TrialResult& result = out.result;
    result.instance_id = instance_id;
    result.repeat = repeat;

    auto records = records_for_names(names);
    const auto truth = vocabulary_truth(config.alt_vocabulary);

    KnowledgeBase kb;
    auto property_adapter = make_property_adapter(config);
    const auto probe_report =
        probe_missing(records, truth, kb, *property_adapter, derive_seed(trial_seed, "probe"));
    for (const auto& outcome : probe_report.outcomes) {
        const bool hit = outcome.inferred == truth.at(outcome.name);
        ++result.probe_total;
        if (hit) ++result.probe_correct;
        out.probe_hits.emplace_back(outcome.name, hit);
    }

    const ProblemInstance problem =
        build_problem("pack all the objects on the desk into the box",
                      make_initial_state(std::move(records)));

    auto planner_adapter = make_planner_adapter(config);
    const LoopOutcome outcome =
        validate_loop(*planner_adapter, canonical_domain(), problem, config.max_replans,
                      derive_seed(trial_seed, "loop"), config.audit);
    if (outcome.infeasible_reason) {
        result.feasible = false;
        result.infeasible_reason = *outcome.infeasible_reason;
    }
    result.success_iteration = outcome.success_iteration();
    result.iterations_used = outcome.iterations_used;
    return out;
}

}  // namespace

BatchReport run_batch(const BatchConfig& config,
                      const std::vector<std::vector<std::string>>& corpus) {
    struct TrialSpec {
        int instance_idx;
        int repeat;
        std::uint64_t seed;
    };
    std::vector<TrialSpec> specs;
    for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
        for (int r = 0; r < config.repeats; ++r) {
            const auto t = static_cast<std::uint64_t>(specs.size());
            specs.push_back({i, r, derive_seed(config.seed, "trial", t)});
        }
    }

    std::vector<TrialOutput> outputs(specs.size());
    int workers = config.workers > 0 ? config.workers
                                     : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(specs.size())));

    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        while (true) {
            const std::size_t t = next.fetch_add(1);
            if (t >= specs.size()) break;
            const TrialSpec& spec = specs[t];
            outputs[t] = run_trial(config, corpus[static_cast<std::size_t>(spec.instance_idx)],
                                   spec.instance_idx + 1, spec.repeat, spec.seed);
        }
    };
    if (workers <= 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
        for (auto& th : pool) th.join();
    }

    BatchReport report;
    for (auto& out : outputs) {
        report.trials.push_back(std::move(out.result));
        for (const auto& [name, hit] : out.probe_hits) {
            auto& acc = report.probe_accuracy[name];
            ++acc.total;
            if (hit) ++acc.correct;
        }
    }
    std::set<int> infeasible_ids;
    for (const auto& t : report.trials) {
        if (t.feasible) {
            ++report.feasible_trials;
        } else {
            ++report.infeasible_trials;
            infeasible_ids.insert(t.instance_id);
        }
    }
    report.infeasible_instances.assign(infeasible_ids.begin(), infeasible_ids.end());

    report.success_by_iteration.assign(static_cast<std::size_t>(config.max_replans) + 1, 0.0);
    if (report.feasible_trials > 0) {
        for (std::size_t k = 0; k < report.success_by_iteration.size(); ++k) {
            int successes = 0;
            for (const auto& t : report.trials) {
                if (t.feasible && t.success_iteration > 0 &&
                    t.success_iteration <= static_cast<int>(k) + 1)
                    ++successes;
            }
            report.success_by_iteration[k] =
                static_cast<double>(successes) / report.feasible_trials;
        }
    }

    return report;
}

std::string BatchReport::to_json_text() const {
    nlohmann::json j;
    j["feasible_trials"] = feasible_trials;
    j["infeasible_trials"] = infeasible_trials;
    j["infeasible_instances"] = infeasible_instances;
    j["success_by_iteration"] = success_by_iteration;
    j["probe_accuracy"] = nlohmann::json::object();
    for (const auto& [name, acc] : probe_accuracy) {
        j["probe_accuracy"][name] = {
            {"correct", acc.correct}, {"total", acc.total}, {"rate", acc.rate()}};
    }
    j["trials"] = nlohmann::json::array();
    for (const auto& t : trials) {
        nlohmann::json jt;
        jt["instance_id"] = t.instance_id;
        jt["repeat"] = t.repeat;
        jt["feasible"] = t.feasible;
        if (!t.feasible) jt["infeasible_reason"] = t.infeasible_reason;
        jt["success_iteration"] = t.success_iteration;
        jt["iterations_used"] = t.iterations_used;
        jt["probe_correct"] = t.probe_correct;
        jt["probe_total"] = t.probe_total;
        j["trials"].push_back(std::move(jt));
    }
    return j.dump(2) + "\n";
}

std::string BatchReport::to_csv_text() const {
    std::ostringstream os;
    os << "iteration,success_rate\n";
    for (std::size_t k = 0; k < success_by_iteration.size(); ++k) {
        os << (k + 1) << ',' << std::fixed << std::setprecision(6) << success_by_iteration[k]
           << '\n';
    }
    return os.str();
}

std::vector<std::vector<std::string>> gen_instances(
    int count, int min_size, int max_size, std::uint64_t seed,
    const std::vector<std::vector<std::string>>& existing) {
    const auto& vocab = vocabulary14();
    const int vocab_size = static_cast<int>(vocab.size());
    if (count < 0) throw Error("instance count must be non-negative");
    if (min_size < 1 || max_size > vocab_size || min_size > max_size)
        throw Error("instance sizes must satisfy 1 <= min <= max <= " +
                    std::to_string(vocab_size));

    auto mask_of = [&](const std::vector<std::string>& names) {
        std::uint32_t mask = 0;
        for (const auto& n : names) {
            int bit = -1;
            for (int i = 0; i < vocab_size; ++i) {
                if (vocab[static_cast<std::size_t>(i)].name == n) {
                    bit = i;
                    break;
                }
            }
            if (bit < 0) throw Error("name outside the bench vocabulary: " + n);
            mask |= 1u << bit;
        }
        return mask;
    };

    std::vector<std::uint32_t> taken;
    for (const auto& inst : existing) taken.push_back(mask_of(inst));

    Rng rng(derive_seed(seed, "gen"));
    std::vector<std::vector<std::string>> out;
    const int budget = 200 * count + 1000;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > budget)
            throw GenerationExhausted("gave up after " + std::to_string(budget) +
                                      " attempts with " + std::to_string(out.size()) + " of " +
                                      std::to_string(count) + " instances");
        const int size = static_cast<int>(
            rng.uniform_int(static_cast<std::uint64_t>(min_size),
                            static_cast<std::uint64_t>(max_size)));
        std::vector<int> indices(static_cast<std::size_t>(vocab_size));
        for (int i = 0; i < vocab_size; ++i) indices[static_cast<std::size_t>(i)] = i;
        rng.shuffle(indices);
        indices.resize(static_cast<std::size_t>(size));
        std::sort(indices.begin(), indices.end());  // keep vocabulary order

        std::uint32_t mask = 0;
        for (int i : indices) mask |= 1u << i;
        bool clash = false;
        for (std::uint32_t other : taken) {
            if ((mask & other) == mask || (mask & other) == other) {
                clash = true;
                break;
            }
        }
        if (clash) continue;

        std::vector<std::string> names;
        for (int i : indices) names.push_back(vocab[static_cast<std::size_t>(i)].name);
        taken.push_back(mask);
        out.push_back(std::move(names));
    }
    return out;
}

}  // namespace probepack
