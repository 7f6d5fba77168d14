#include "probepack/adapters.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <filesystem>
#include <mutex>

#include <httplib.h>
#include <json.hpp>

#include "probepack/planner.hpp"
#include "probepack/rng.hpp"
#include "probepack/vocabulary.hpp"

namespace probepack {

std::string to_string(AdapterFamily f) {
    switch (f) {
        case AdapterFamily::oracle: return "oracle";
        case AdapterFamily::noisy: return "noisy";
        case AdapterFamily::remote: return "remote";
        case AdapterFamily::replay: return "replay";
    }
    return "?";
}

std::optional<AdapterFamily> parse_adapter_family(const std::string& s) {
    if (s == "oracle") return AdapterFamily::oracle;
    if (s == "noisy") return AdapterFamily::noisy;
    if (s == "remote") return AdapterFamily::remote;
    if (s == "replay") return AdapterFamily::replay;
    return std::nullopt;
}

std::optional<DetectionAssist> parse_detection_assist(const std::string& s) {
    if (s == "none") return DetectionAssist::none;
    if (s == "bounding_box" || s == "bbox") return DetectionAssist::bounding_box;
    if (s == "graph") return DetectionAssist::graph;
    if (s == "both") return DetectionAssist::both;
    return std::nullopt;
}

std::optional<ProbeNoisePreset> parse_probe_preset(const std::string& s) {
    if (s == "robot") return ProbeNoisePreset::robot;
    if (s == "robot_tree" || s == "robot+tree") return ProbeNoisePreset::robot_tree;
    return std::nullopt;
}

const std::map<std::string, double>& probe_preset_accuracy(ProbeNoisePreset preset) {
    static const std::map<std::string, double> robot = [] {
        std::map<std::string, double> m;
        for (const auto& e : vocabulary14()) m[e.name] = e.robot_accuracy;
        return m;
    }();
    static const std::map<std::string, double> robot_tree = [] {
        std::map<std::string, double> m;
        for (const auto& e : vocabulary14()) m[e.name] = e.robot_tree_accuracy;
        return m;
    }();
    return preset == ProbeNoisePreset::robot ? robot : robot_tree;
}

PlannerNoise PlannerNoise::paper() {
    PlannerNoise n;
    n.initial_clean = 0.7605;
    n.repair_rates = {0.60459, 0.47202, 0.21, 0.13418, 0.07602};
    n.fault_weights = {
        {FaultKind::drop_push, 0.35},          {FaultKind::swap_plastic_first, 0.25},
        {FaultKind::pick_then_fold, 0.20},     {FaultKind::drop_place_after_bend, 0.10},
        {FaultKind::unknown_action_name, 0.10},
    };
    return n;
}

// ---- exchange records ----

std::string exchange_to_json_text(const ExchangeRecord& r) {
    nlohmann::json j;
    j["role"] = r.role;
    j["model"] = r.model;
    j["temperature"] = r.temperature;
    j["top_p"] = r.top_p;
    j["prompt"] = r.prompt;
    j["response"] = r.response;
    return j.dump(2) + "\n";
}

ExchangeRecord exchange_from_json_text(const std::string& text) {
    try {
        auto j = nlohmann::json::parse(text);
        ExchangeRecord r;
        r.role = j.at("role").get<std::string>();
        r.model = j.at("model").get<std::string>();
        r.temperature = j.at("temperature").get<double>();
        r.top_p = j.at("top_p").get<double>();
        r.prompt = j.at("prompt").get<std::string>();
        r.response = j.at("response").get<std::string>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw FileError(std::string("bad exchange json: ") + e.what());
    }
}

std::string exchange_file_name(const std::string& role, const std::string& cache_key) {
    return role + "-" + cache_key + ".json";
}

// ---- HTTP client ----

struct HttpLlmClient::Impl {
    AdapterConfig config;
    httplib::Client http;
    std::mutex mutex;
    std::condition_variable slot_free;
    int inflight = 0;

    explicit Impl(const AdapterConfig& c) : config(c), http(c.endpoint) {
        http.set_connection_timeout(10, 0);
        http.set_read_timeout(120, 0);
        http.set_write_timeout(120, 0);
    }
};

HttpLlmClient::HttpLlmClient(const AdapterConfig& config) : impl_(std::make_unique<Impl>(config)) {
    if (config.endpoint.empty()) throw AdapterFailure("remote family needs an endpoint");
    if (!impl_->http.is_valid())
        throw AdapterFailure("cannot reach endpoint scheme: " + config.endpoint);
}

HttpLlmClient::~HttpLlmClient() = default;

std::string HttpLlmClient::complete(const PromptEnvelope& prompt) {
    {
        std::unique_lock lock(impl_->mutex);
        impl_->slot_free.wait(lock,
                              [&] { return impl_->inflight < impl_->config.max_inflight; });
        ++impl_->inflight;
    }
    struct SlotGuard {
        Impl* impl;
        ~SlotGuard() {
            std::lock_guard lock(impl->mutex);
            --impl->inflight;
            impl->slot_free.notify_one();
        }
    } guard{impl_.get()};

    const double top_p =
        is_visual_role(prompt.role) ? impl_->config.top_p_visual : impl_->config.top_p_text;
    nlohmann::json body;
    body["model"] = impl_->config.model;
    body["temperature"] = impl_->config.temperature;
    body["top_p"] = top_p;
    body["messages"] = {{{"role", "system"}, {"content", prompt.system}},
                        {{"role", "user"}, {"content", prompt.user}}};

    httplib::Headers headers;
    if (!impl_->config.api_key.empty())
        headers.emplace("Authorization", "Bearer " + impl_->config.api_key);

    auto res = impl_->http.Post("/v1/chat/completions", headers, body.dump(), "application/json");
    if (!res)
        throw AdapterFailure("transport error talking to " + impl_->config.endpoint + ": " +
                             httplib::to_string(res.error()));
    if (res->status != 200)
        throw AdapterFailure("completion endpoint returned status " +
                             std::to_string(res->status));

    std::string content;
    try {
        auto j = nlohmann::json::parse(res->body);
        content = j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw AdapterFailure(std::string("malformed completion payload: ") + e.what());
    }

    if (!impl_->config.record_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(impl_->config.record_dir, ec);
        ExchangeRecord record;
        record.role = to_string(prompt.role);
        record.model = impl_->config.model;
        record.temperature = impl_->config.temperature;
        record.top_p = top_p;
        record.prompt = prompt.system + "\n\n" + prompt.user;
        record.response = content;
        const std::string path = impl_->config.record_dir + "/" +
                                 exchange_file_name(record.role, prompt.cache_key());
        write_text_file(path, exchange_to_json_text(record));
    }
    return content;
}

// ---- replay client ----

ReplayLlmClient::ReplayLlmClient(std::string replay_dir) : dir_(std::move(replay_dir)) {
    if (dir_.empty()) throw AdapterFailure("replay family needs a replay directory");
}

std::string ReplayLlmClient::complete(const PromptEnvelope& prompt) {
    const std::string path =
        dir_ + "/" + exchange_file_name(to_string(prompt.role), prompt.cache_key());
    if (!std::filesystem::exists(path))
        throw ReplayMiss("no recorded exchange for " + to_string(prompt.role) + " prompt " +
                         prompt.cache_key());
    return exchange_from_json_text(read_text_file(path)).response;
}

// ---- perception ----

DetectionResult OraclePerception::detect(const SceneSpec& scene, std::uint64_t seed) {
    (void)seed;
    DetectionResult result;
    result.records = records_from_views(scene.top);
    for (const auto& v : scene.top) result.centroids.push_back(v.centroid);
    return result;
}

namespace {

// Greedy pairing of two view lists by horizontal distance (the cameras share
// the x axis). Returns indices in `from` that found no partner in `to`.
std::vector<int> unmatched_by_column(const std::vector<SceneObjectView>& from,
                                     const std::vector<SceneObjectView>& to) {
    std::vector<bool> taken(to.size(), false);
    std::vector<int> unmatched;
    for (std::size_t i = 0; i < from.size(); ++i) {
        int best = -1;
        double best_dx = 0.5;  // half the layout pitch; farther means no partner
        for (std::size_t j = 0; j < to.size(); ++j) {
            if (taken[j]) continue;
            double dx = std::abs(from[i].centroid.x - to[j].centroid.x);
            if (dx < best_dx) {
                best = static_cast<int>(j);
                best_dx = dx;
            }
        }
        if (best >= 0)
            taken[best] = true;
        else
            unmatched.push_back(static_cast<int>(i));
    }
    return unmatched;
}

}  // namespace

DetectionResult NoisyPerception::detect(const SceneSpec& scene, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "detect"));
    // Draw both scene-level events up front so the assist mode never shifts the
    // random sequence.
    const bool miss_event = rng.chance(noise_.p_miss);
    const bool hall_event = rng.chance(noise_.p_hall);

    std::vector<SceneObjectView> top = scene.top;
    std::vector<SceneObjectView> side = scene.side;

    // A miss is a top-view occlusion: the object stays visible from the side.
    std::optional<SceneObjectView> dropped;
    if (miss_event && !top.empty()) {
        std::size_t victim = rng.index(top.size());
        dropped = top[victim];
        top.erase(top.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    // A hallucination is a persistent artifact (reflection, shadow edge) and
    // shows up in both views, which is what makes it hard to reject.
    bool phantom_present = false;
    if (hall_event && !scene.top.empty()) {
        const SceneObjectView& tmpl = scene.top[rng.index(scene.top.size())];
        SceneObjectView phantom = tmpl;
        phantom.id = "";
        phantom.centroid.x += 1.0 + 2.0 * rng.uniform();
        phantom.centroid.y += 1.0 + 2.0 * rng.uniform();
        SceneObjectView phantom_side = phantom;
        phantom_side.centroid.y = side.empty() ? 2.0 : side.front().centroid.y;
        top.push_back(phantom);
        side.push_back(phantom_side);
        phantom_present = true;
    }

    const bool boxes = noise_.assist == DetectionAssist::bounding_box ||
                       noise_.assist == DetectionAssist::both;
    const bool graph = noise_.assist == DetectionAssist::graph ||
                       noise_.assist == DetectionAssist::both;

    // Per-object boxes in both views: a side box with no top partner recovers
    // an occluded object. A top box with no side partner could be a real object
    // occluded from the side, so nothing is deleted on that evidence alone.
    if (boxes && dropped) {
        for (int i : unmatched_by_column(side, top)) {
            (void)i;
            top.push_back(*dropped);
            dropped.reset();
            break;
        }
    }

    // Neighbourhood-graph consensus between the views: vertices that the two
    // graphs cannot pair are either re-added (side only) or rejected (top
    // only). Strong enough to delete, unlike a lone box.
    if (graph) {
        std::vector<Point2> top_points, side_points;
        for (const auto& v : top) top_points.push_back(v.centroid);
        for (const auto& v : side) side_points.push_back({v.centroid.x, 0.0});
        const DetectionGraph top_graph = build_detection_graph(top_points);
        const DetectionGraph side_graph = build_detection_graph(side_points);
        if (top_graph.vertex_count != side_graph.vertex_count || dropped || phantom_present) {
            if (dropped) {
                top.push_back(*dropped);
                dropped.reset();
            }
            if (phantom_present) {
                for (int i : unmatched_by_column(top, scene.side)) {
                    top.erase(top.begin() + i);
                    phantom_present = false;
                    break;
                }
            }
        }
    }

    // Restore layout order so naming stays deterministic.
    std::sort(top.begin(), top.end(), [](const SceneObjectView& a, const SceneObjectView& b) {
        return a.centroid.y != b.centroid.y ? a.centroid.y < b.centroid.y
                                            : a.centroid.x < b.centroid.x;
    });

    DetectionResult result;
    result.records = records_from_views(top);
    for (const auto& v : top) result.centroids.push_back(v.centroid);
    result.missing_count = dropped ? 1 : 0;
    result.hallucinated_count = phantom_present ? 1 : 0;
    return result;
}

DetectionResult LlmPerception::detect(const SceneSpec& scene, std::uint64_t seed) {
    (void)seed;
    const auto descriptors =
        parse_detector_answer(client_.complete(render_detector_prompt(scene)));
    const auto names = parse_namer_answer(client_.complete(render_namer_prompt(descriptors)));
    if (names.size() != descriptors.size())
        throw AdapterFailure("namer returned " + std::to_string(names.size()) + " names for " +
                             std::to_string(descriptors.size()) + " objects");
    DetectionResult result;
    for (std::size_t i = 0; i < names.size(); ++i) {
        ObjectName parsed = parse_object_name(names[i]);
        ObjectRecord r;
        r.index = static_cast<int>(i);
        r.name = names[i];
        r.color = parsed.color;
        r.dimension = parsed.dimension;
        r.shape = parsed.shape;
        result.records.push_back(std::move(r));
        result.centroids.push_back(i < scene.top.size() ? scene.top[i].centroid : Point2{});
    }
    const int truth = static_cast<int>(scene.top.size());
    const int seen = static_cast<int>(result.records.size());
    result.missing_count = std::max(0, truth - seen);
    result.hallucinated_count = std::max(0, seen - truth);
    return result;
}

// ---- property probing ----

Property OracleProperty::classify(const ObjectRecord& object, const ObservationTriple& obs,
                                  ProbeAction action, std::uint64_t seed) {
    (void)object;
    (void)seed;
    return classify_property(obs, action);
}

Property NoisyProperty::classify(const ObjectRecord& object, const ObservationTriple& obs,
                                 ProbeAction action, std::uint64_t seed) {
    const Property correct = classify_property(obs, action);
    ObjectName base = parse_object_name(object.name);
    base.ordinal = 1;  // the preset is keyed by the base vocabulary name
    const auto& table = probe_preset_accuracy(preset_);
    auto it = table.find(base.str());
    const double accuracy = it == table.end() ? 1.0 : it->second;
    Rng rng(derive_seed(seed, "classify"));
    if (rng.chance(accuracy)) return correct;
    std::vector<Property> wrong = properties_for_dimension(object.dimension);
    wrong.erase(std::remove(wrong.begin(), wrong.end(), correct), wrong.end());
    return wrong[rng.index(wrong.size())];
}

Property LlmProperty::classify(const ObjectRecord& object, const ObservationTriple& obs,
                               ProbeAction action, std::uint64_t seed) {
    (void)seed;
    return parse_property_answer(client_.complete(render_property_prompt(object, action, obs)));
}

// ---- planning ----

PlanningResult OraclePlanner::plan(const DomainDescription& d, const ProblemInstance& p,
                                   std::uint64_t seed) {
    (void)seed;
    return probepack::plan(d, p);
}

PlanningResult OraclePlanner::replan(const DomainDescription& d, const ProblemInstance& p,
                                     const PlannerFeedback& feedback, std::uint64_t seed,
                                     int iteration) {
    (void)feedback;
    (void)seed;
    (void)iteration;
    return probepack::plan(d, p);
}

PlanningResult NoisyPlanner::plan(const DomainDescription& d, const ProblemInstance& p,
                                  std::uint64_t seed) {
    return mutate_or_pass(d, p, noise_.initial_clean, seed);
}

PlanningResult NoisyPlanner::replan(const DomainDescription& d, const ProblemInstance& p,
                                    const PlannerFeedback& feedback, std::uint64_t seed,
                                    int iteration) {
    (void)feedback;
    double rate = 1.0;
    if (!noise_.repair_rates.empty()) {
        const std::size_t step = iteration >= 2 ? static_cast<std::size_t>(iteration - 2) : 0;
        rate = noise_.repair_rates[std::min(step, noise_.repair_rates.size() - 1)];
    }
    return mutate_or_pass(d, p, rate, seed);
}

PlanningResult NoisyPlanner::mutate_or_pass(const DomainDescription& d, const ProblemInstance& p,
                                            double clean_probability, std::uint64_t seed) {
    PlanningResult base = probepack::plan(d, p);
    if (base.infeasible_reason) return base;
    Rng rng(derive_seed(seed, "mutate"));
    if (rng.chance(clean_probability)) return base;

    double total = 0.0;
    std::vector<std::pair<FaultKind, double>> options;
    for (const auto& [kind, weight] : noise_.fault_weights) {
        if (weight <= 0.0 || is_domain_fault(kind)) continue;
        if (!plan_fault_applicable(base.lines, kind, p.s_init)) continue;
        options.emplace_back(kind, weight);
        total += weight;
    }
    if (options.empty()) return base;

    const double draw = rng.uniform() * total;
    double mass = 0.0;
    FaultKind chosen = options.back().first;
    for (const auto& [kind, weight] : options) {
        mass += weight;
        if (draw < mass) {
            chosen = kind;
            break;
        }
    }

    PlanningResult out;
    out.lines = inject_plan_fault(base.lines, chosen, p.s_init);
    try {
        out.plan = plan_from_lines(out.lines, p.s_init);
    } catch (const ParseFailure&) {
        // corrupted verbs stay as raw text; execution reports the syntax error
    }
    return out;
}

PlanningResult LlmPlanner::plan(const DomainDescription& d, const ProblemInstance& p,
                                std::uint64_t seed) {
    (void)seed;
    return replan(d, p, PlannerFeedback{}, seed, 1);
}

PlanningResult LlmPlanner::replan(const DomainDescription& d, const ProblemInstance& p,
                                  const PlannerFeedback& feedback, std::uint64_t seed,
                                  int iteration) {
    (void)seed;
    const PromptEnvelope prompt = iteration <= 1 ? render_planner_prompt(d, p)
                                                 : render_replanner_prompt(d, p, feedback);
    const auto lines = parse_plan_answer(client_.complete(prompt));
    PlanningResult result;
    if (lines.size() == 1 && lines.front().rfind("infeasible", 0) == 0) {
        std::string reason = lines.front();
        const std::size_t colon = reason.find(':');
        reason = colon == std::string::npos ? "" : reason.substr(colon + 1);
        const std::size_t start = reason.find_first_not_of(" \t");
        result.infeasible_reason =
            start == std::string::npos ? "unspecified" : reason.substr(start);
        return result;
    }
    result.lines = lines;
    try {
        result.plan = plan_from_lines(lines, p.s_init);
    } catch (const ParseFailure&) {
        // leave the raw lines; the execution loop surfaces the syntax error
    }
    return result;
}

// ---- factory ----

AdapterSet make_adapters(const AdapterConfig& config) {
    AdapterSet set;
    switch (config.family) {
        case AdapterFamily::oracle:
            set.perception = std::make_unique<OraclePerception>();
            set.property = std::make_unique<OracleProperty>();
            set.planner = std::make_unique<OraclePlanner>();
            break;
        case AdapterFamily::noisy:
            set.perception = std::make_unique<NoisyPerception>(config.detection);
            set.property = std::make_unique<NoisyProperty>(config.probe_preset);
            set.planner = std::make_unique<NoisyPlanner>(config.planner_noise);
            break;
        case AdapterFamily::remote:
            set.client = std::make_unique<HttpLlmClient>(config);
            break;
        case AdapterFamily::replay:
            set.client = std::make_unique<ReplayLlmClient>(config.replay_dir);
            break;
    }
    if (set.client) {
        set.perception = std::make_unique<LlmPerception>(*set.client);
        set.property = std::make_unique<LlmProperty>(*set.client);
        set.planner = std::make_unique<LlmPlanner>(*set.client);
    }
    return set;
}

}  // namespace probepack
