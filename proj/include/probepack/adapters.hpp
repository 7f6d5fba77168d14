#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "probepack/execution.hpp"
#include "probepack/perception.hpp"
#include "probepack/probing.hpp"
#include "probepack/prompts.hpp"

namespace probepack {

enum class AdapterFamily { oracle, noisy, remote, replay };

std::string to_string(AdapterFamily f);
std::optional<AdapterFamily> parse_adapter_family(const std::string& s);

enum class DetectionAssist { none, bounding_box, graph, both };

std::optional<DetectionAssist> parse_detection_assist(const std::string& s);

struct DetectionNoise {
    // Scene-level event rates: chance the detector misses one object, chance it
    // reports one object that is not there.
    double p_miss = 0.0184;
    double p_hall = 0.0053;
    DetectionAssist assist = DetectionAssist::none;
};

enum class ProbeNoisePreset { robot, robot_tree };

std::optional<ProbeNoisePreset> parse_probe_preset(const std::string& s);

// Per-object probe-classification accuracy, keyed by vocabulary base name.
const std::map<std::string, double>& probe_preset_accuracy(ProbeNoisePreset preset);

struct PlannerNoise {
    // Chance the first plan comes out clean, then the chance each successive
    // replanning attempt repairs a still-broken plan.
    double initial_clean = 1.0;
    std::vector<double> repair_rates;
    std::map<FaultKind, double> fault_weights;

    // Calibrated so 380-trial batches land on the published replanning curve.
    static PlannerNoise paper();
};

struct AdapterConfig {
    AdapterFamily family = AdapterFamily::oracle;
    std::uint64_t seed = 0;

    // remote endpoint, chat-completions shaped
    std::string endpoint;
    std::string api_key;
    std::string model = "desk-llm";
    double temperature = 0.2;
    double top_p_text = 0.7;
    double top_p_visual = 0.1;
    int max_inflight = 4;

    std::string record_dir;  // when set, remote exchanges are written here
    std::string replay_dir;  // exchange source for the replay family

    DetectionNoise detection;
    ProbeNoisePreset probe_preset = ProbeNoisePreset::robot_tree;
    PlannerNoise planner_noise = PlannerNoise::paper();
};

// ---- LLM transport ----

struct ExchangeRecord {
    std::string role;
    std::string model;
    double temperature = 0.0;
    double top_p = 0.0;
    std::string prompt;  // system and user concatenated
    std::string response;
};

std::string exchange_to_json_text(const ExchangeRecord& r);
ExchangeRecord exchange_from_json_text(const std::string& text);
std::string exchange_file_name(const std::string& role, const std::string& cache_key);

class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual std::string complete(const PromptEnvelope& prompt) = 0;
};

// POSTs to <endpoint>/v1/chat/completions and returns the first choice's
// message content. Throws AdapterFailure on transport or protocol errors.
// Records every exchange into record_dir when configured. At most max_inflight
// requests run concurrently.
class HttpLlmClient : public LlmClient {
public:
    explicit HttpLlmClient(const AdapterConfig& config);
    ~HttpLlmClient() override;
    std::string complete(const PromptEnvelope& prompt) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Serves responses from previously recorded exchanges; an unknown prompt is a
// ReplayMiss.
class ReplayLlmClient : public LlmClient {
public:
    explicit ReplayLlmClient(std::string replay_dir);
    std::string complete(const PromptEnvelope& prompt) override;

private:
    std::string dir_;
};

// ---- perception ----

class OraclePerception : public PerceptionAdapter {
public:
    DetectionResult detect(const SceneSpec& scene, std::uint64_t seed) override;
};

class NoisyPerception : public PerceptionAdapter {
public:
    explicit NoisyPerception(DetectionNoise noise) : noise_(noise) {}
    DetectionResult detect(const SceneSpec& scene, std::uint64_t seed) override;

private:
    DetectionNoise noise_;
};

class LlmPerception : public PerceptionAdapter {
public:
    explicit LlmPerception(LlmClient& client) : client_(client) {}
    DetectionResult detect(const SceneSpec& scene, std::uint64_t seed) override;

private:
    LlmClient& client_;
};

// ---- property probing ----

class OracleProperty : public PropertyAdapter {
public:
    Property classify(const ObjectRecord& object, const ObservationTriple& obs, ProbeAction action,
                      std::uint64_t seed) override;
};

class NoisyProperty : public PropertyAdapter {
public:
    explicit NoisyProperty(ProbeNoisePreset preset) : preset_(preset) {}
    Property classify(const ObjectRecord& object, const ObservationTriple& obs, ProbeAction action,
                      std::uint64_t seed) override;

private:
    ProbeNoisePreset preset_;
};

class LlmProperty : public PropertyAdapter {
public:
    explicit LlmProperty(LlmClient& client) : client_(client) {}
    Property classify(const ObjectRecord& object, const ObservationTriple& obs, ProbeAction action,
                      std::uint64_t seed) override;

private:
    LlmClient& client_;
};

// ---- planning ----

class OraclePlanner : public PlannerAdapter {
public:
    PlanningResult plan(const DomainDescription& d, const ProblemInstance& p,
                        std::uint64_t seed) override;
    PlanningResult replan(const DomainDescription& d, const ProblemInstance& p,
                          const PlannerFeedback& feedback, std::uint64_t seed,
                          int iteration) override;
};

// Produces the canonical plan, then with preset probability corrupts it with a
// weighted fault; replanning repairs with the preset's per-iteration rates.
class NoisyPlanner : public PlannerAdapter {
public:
    explicit NoisyPlanner(PlannerNoise noise) : noise_(std::move(noise)) {}
    PlanningResult plan(const DomainDescription& d, const ProblemInstance& p,
                        std::uint64_t seed) override;
    PlanningResult replan(const DomainDescription& d, const ProblemInstance& p,
                          const PlannerFeedback& feedback, std::uint64_t seed,
                          int iteration) override;

private:
    PlanningResult mutate_or_pass(const DomainDescription& d, const ProblemInstance& p,
                                  double clean_probability, std::uint64_t seed);
    PlannerNoise noise_;
};

class LlmPlanner : public PlannerAdapter {
public:
    explicit LlmPlanner(LlmClient& client) : client_(client) {}
    PlanningResult plan(const DomainDescription& d, const ProblemInstance& p,
                        std::uint64_t seed) override;
    PlanningResult replan(const DomainDescription& d, const ProblemInstance& p,
                          const PlannerFeedback& feedback, std::uint64_t seed,
                          int iteration) override;

private:
    LlmClient& client_;
};

// ---- factory bundle ----

struct AdapterSet {
    std::unique_ptr<LlmClient> client;  // null for oracle/noisy families
    std::unique_ptr<PerceptionAdapter> perception;
    std::unique_ptr<PropertyAdapter> property;
    std::unique_ptr<PlannerAdapter> planner;
};

AdapterSet make_adapters(const AdapterConfig& config);

}  // namespace probepack
