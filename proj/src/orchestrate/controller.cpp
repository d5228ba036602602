#include "mirrorbench/orchestrate/controller.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <mutex>
#include <random>
#include <thread>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/hash.hpp"
#include "mirrorbench/common/rng.hpp"
#include "mirrorbench/common/strings.hpp"
#include "mirrorbench/core/episode_io.hpp"
#include "mirrorbench/judge/judges.hpp"
#include "mirrorbench/lexdiv/anchor.hpp"
#include "mirrorbench/orchestrate/stats.hpp"
#include "mirrorbench/rollout/driver.hpp"

namespace mirrorbench::orchestrate {

namespace fs = std::filesystem;
using nlohmann::json;

ProviderFactory default_provider_factory() {
    return [](const ClientConfig& client) -> std::shared_ptr<model::Provider> {
        if (client.provider == "mock") {
            return std::make_shared<model::DeterministicMockProvider>();
        }
        model::HttpProviderConfig http;
        http.base_url = client.base_url;
        if (!client.path.empty()) http.path = client.path;
        http.api_key_env = client.api_key_env;
        return std::make_shared<model::HttpChatProvider>(http);
    };
}

std::string generate_run_id(const Clock& clock) {
    const std::int64_t now = clock.now_unix_seconds();
    std::random_device rd;
    std::mt19937_64 gen((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
    char buf[40];
    std::snprintf(buf, sizeof(buf), "run-%lld-%06llx", static_cast<long long>(now),
                  static_cast<unsigned long long>(gen() & 0xFFFFFF));
    return buf;
}

namespace {

struct EpisodeOutcome {
    std::string episode_id;
    std::string status;
    double duration_s = 0.0;
    std::string artifact_rel;
    json metric_values = json::object();
    std::vector<core::TelemetryRecord> telemetry;
    std::optional<double> aggregate_value;
    std::optional<core::RolloutArtifact> artifact;  // kept for the controls phase
};

// Rollout artifacts shared across metric units through content-keyed files.
class ArtifactManager {
public:
    ArtifactManager(std::string root_dir) : root_(std::move(root_dir)) {
        fs::create_directories(fs::path(root_) / "artifacts");
        fs::create_directories(fs::path(root_) / "anchors");
    }

    std::string rel_path(const std::string& proxy, const std::string& dataset,
                         const std::string& episode_id, std::int64_t seed,
                         const std::string& pack_version,
                         const std::string& assistant_model) const {
        hash::CanonicalEncoder enc;
        enc.field('p', proxy)
            .field('d', dataset)
            .field('e', episode_id)
            .field('s', static_cast<std::uint64_t>(seed))
            .field('v', pack_version)
            .field('a', assistant_model);
        return "artifacts/" + enc.digest_hex() + ".json";
    }

    std::string abs_path(const std::string& rel) const {
        return (fs::path(root_) / rel).string();
    }

    std::string anchors_dir() const { return (fs::path(root_) / "anchors").string(); }

private:
    std::string root_;
};

core::TelemetryRole role_for_record(const std::string& name) {
    if (name == "assistant") return core::TelemetryRole::kAssistant;
    if (name == "judge") return core::TelemetryRole::kJudge;
    if (name == "goal_generator") return core::TelemetryRole::kGoalGenerator;
    return core::TelemetryRole::kUserProxy;
}

json telemetry_to_json(const std::vector<core::TelemetryRecord>& records) {
    json arr = json::array();
    for (const core::TelemetryRecord& record : records) {
        json row{{"role", core::telemetry_role_name(record.role)},
                 {"input_tokens", record.input_tokens},
                 {"output_tokens", record.output_tokens},
                 {"latency_s", record.latency_s},
                 {"model", record.model},
                 {"cached", record.cached}};
        if (record.cost_usd.has_value()) row["cost_usd"] = *record.cost_usd;
        arr.push_back(std::move(row));
    }
    return arr;
}

void price_records(std::vector<core::TelemetryRecord>& records,
                   const model::PricingTable& pricing) {
    for (core::TelemetryRecord& record : records) {
        if (record.cached || record.cost_usd.has_value()) continue;
        model::Usage usage;
        usage.input_tokens = record.input_tokens;
        usage.output_tokens = record.output_tokens;
        record.cost_usd = model::try_cost_usd(usage, record.model, pricing);
        if (!record.cost_usd.has_value()) record.cost_usd.reset();
    }
}

// Executes the episodes of one unit and aggregates; owns no store state
// beyond row writes funneled through the controller.
class UnitExecutor {
public:
    UnitExecutor(RunStore& store, const JobConfig& config, const ControllerOptions& options,
                 const rollout::PromptPack& pack, const ArtifactManager& artifacts,
                 const std::string& run_id, std::atomic<std::size_t>& episode_counter)
        : store_(store), config_(config), options_(options), pack_(pack), artifacts_(artifacts),
          run_id_(run_id), episode_counter_(episode_counter) {}

    void execute(const Unit& unit, bool owns_rollout_telemetry) {
        const MetricConfig& metric_cfg = metric_config(unit.metric);
        const DatasetConfig& dataset_cfg = dataset_config(unit.dataset);
        const ProxyConfig& proxy_cfg = proxy_config(unit.user_proxy);

        store_.set_unit_status(run_id_, unit.unit_id, "running");
        store_.delete_episodes_for_unit(run_id_, unit.unit_id);

        const std::vector<core::Episode> episodes =
            core::read_episodes_jsonl(dataset_cfg.path, dataset_cfg.limit);

        auto cache = config_.run.cache ? store_.cache() : nullptr;
        model::ModelClient proxy_client(options_.provider_factory(proxy_cfg.client),
                                        model::RetryPolicy{}, cache, options_.clock);
        model::ModelClient assistant_client(options_.provider_factory(config_.driver.assistant),
                                            model::RetryPolicy{}, cache, options_.clock);
        std::optional<model::ModelClient> judge_client;
        if (metric_cfg.client.has_value()) {
            judge_client.emplace(options_.provider_factory(*metric_cfg.client),
                                 model::RetryPolicy{}, cache, options_.clock);
        }

        const MetricInfo& info = metric_registry().at(unit.metric);
        std::optional<lexdiv::HumanAnchor> anchor;
        std::size_t anchor_excluded = 0;
        if (info.needs_anchor) {
            auto [a, excluded] = resolve_anchor(metric_cfg, dataset_cfg, episodes);
            anchor = a;
            anchor_excluded = excluded;
        }

        rollout::RolloutConfig rollout_cfg;
        rollout_cfg.user_proxy_model = proxy_cfg.client.model;
        rollout_cfg.assistant_model = config_.driver.assistant.model;
        rollout_cfg.temperature = config_.driver.temperature;
        rollout_cfg.max_tokens = config_.driver.max_tokens;
        rollout_cfg.prompt_pack_version = pack_.version();
        rollout_cfg.episode_budget_s = config_.driver.episode_budget_s;
        rollout_cfg.seed_hint = unit.seed;

        judge::JudgeConfig judge_cfg;
        judge_cfg.judge_model = metric_cfg.client.has_value() ? metric_cfg.client->model : "";
        judge_cfg.num_judge_samples = metric_cfg.num_judge_samples;
        judge_cfg.compute_controls = metric_cfg.compute_controls;
        judge_cfg.rng_seed = static_cast<std::uint64_t>(unit.seed);
        judge_cfg.rubric_version = pack_.version();

        std::vector<EpisodeOutcome> outcomes(episodes.size());
        const auto run_episode_task = [&](std::size_t index) {
            outcomes[index] = run_one(unit, metric_cfg, episodes[index], rollout_cfg, judge_cfg,
                                      proxy_client, assistant_client,
                                      judge_client ? &*judge_client : nullptr, anchor,
                                      owns_rollout_telemetry);
            persist_episode(unit, outcomes[index]);
        };

        if (config_.run.backend == "async" && episodes.size() > 1) {
            run_parallel(episodes.size(), run_episode_task);
        } else {
            for (std::size_t i = 0; i < episodes.size(); ++i) run_episode_task(i);
        }

        // Controls phase: judge self-comparisons and the RNR reference bound.
        json controls_extras = json::object();
        if (metric_cfg.compute_controls && judge_client.has_value()) {
            apply_controls(unit, metric_cfg, judge_cfg, *judge_client, outcomes,
                           controls_extras);
        }

        finalize_unit(unit, metric_cfg, outcomes, anchor, anchor_excluded, controls_extras);
    }

private:
    const MetricConfig& metric_config(const std::string& name) const {
        for (const MetricConfig& metric : config_.metrics) {
            if (metric.name == name) return metric;
        }
        throw ConfigError("metric not in config: " + name);
    }
    const DatasetConfig& dataset_config(const std::string& name) const {
        for (const DatasetConfig& dataset : config_.datasets) {
            if (dataset.name == name) return dataset;
        }
        throw ConfigError("dataset not in config: " + name);
    }
    const ProxyConfig& proxy_config(const std::string& name) const {
        for (const ProxyConfig& proxy : config_.user_proxies) {
            if (proxy.name == name) return proxy;
        }
        throw ConfigError("proxy not in config: " + name);
    }

    std::pair<lexdiv::HumanAnchor, std::size_t> resolve_anchor(
        const MetricConfig& metric_cfg, const DatasetConfig& dataset_cfg,
        const std::vector<core::Episode>& episodes) {
        const auto metric_id = lexdiv::metric_id_from_name(metric_cfg.name);
        if (!metric_id) throw ConfigError("not a lexical metric: " + metric_cfg.name);

        if (metric_cfg.anchor_mode == AnchorMode::kFile) {
            return {lexdiv::load_anchor(metric_cfg.anchor_path), 0};
        }

        // Auto mode: anchors are computed once per (dataset, metric, params)
        // and reused across runs via a file next to the store.
        hash::CanonicalEncoder enc;
        enc.field('d', dataset_cfg.name)
            .field('m', std::string_view(metric_cfg.name))
            .field('t', metric_cfg.tokenizer.id())
            .field('w', static_cast<std::uint64_t>(metric_cfg.lex.window))
            .field('s', static_cast<std::uint64_t>(metric_cfg.lex.sample_size))
            .field('k', static_cast<std::uint64_t>(metric_cfg.lex.min_tokens))
            .field('l', static_cast<std::uint64_t>(dataset_cfg.limit.value_or(0)));
        const std::string anchor_path =
            artifacts_.anchors_dir() + "/" + enc.digest_hex() + ".json";
        if (fs::exists(anchor_path)) {
            return {lexdiv::load_anchor(anchor_path), 0};
        }
        std::vector<lexdiv::TokenSequence> sequences;
        sequences.reserve(episodes.size());
        for (const core::Episode& episode : episodes) {
            sequences.push_back(
                lexdiv::tokenize(core::user_side_text(episode.reference), metric_cfg.tokenizer));
        }
        const lexdiv::AnchorResult result = lexdiv::compute_anchor(
            sequences, *metric_id, metric_cfg.lex, metric_cfg.tokenizer, dataset_cfg.name);
        lexdiv::save_anchor(result.anchor, anchor_path);
        return {result.anchor, result.excluded};
    }

    EpisodeOutcome run_one(const Unit& unit, const MetricConfig& metric_cfg,
                           const core::Episode& episode, const rollout::RolloutConfig& rollout_cfg,
                           const judge::JudgeConfig& judge_cfg,
                           model::ModelClient& proxy_client, model::ModelClient& assistant_client,
                           model::ModelClient* judge_client,
                           const std::optional<lexdiv::HumanAnchor>& anchor,
                           bool owns_rollout_telemetry) {
        EpisodeOutcome outcome;
        outcome.episode_id = episode.episode_id;
        const double started = options_.clock->monotonic_seconds();
        outcome.metric_values["metric"] = unit.metric;

        const std::string rel =
            artifacts_.rel_path(unit.user_proxy, unit.dataset, episode.episode_id, unit.seed,
                                pack_.version(), rollout_cfg.assistant_model);
        outcome.artifact_rel = rel;
        const std::string abs = artifacts_.abs_path(rel);

        try {
            core::RolloutArtifact artifact = [&] {
                if (fs::exists(abs)) return rollout::load_artifact(abs);
                core::RolloutArtifact fresh =
                    rollout::run_episode(episode, rollout_cfg, proxy_client, assistant_client,
                                         pack_, *options_.clock);
                rollout::save_artifact(fresh, abs);
                return fresh;
            }();

            outcome.status = core::rollout_status_name(artifact.status);
            if (owns_rollout_telemetry) {
                outcome.telemetry = artifact.telemetry;
            }

            if (artifact.status == core::RolloutStatus::kSuccess) {
                compute_metric(unit, metric_cfg, judge_cfg, artifact, judge_client, anchor,
                               outcome);
            } else {
                outcome.metric_values["error"] =
                    std::string("rollout ") + core::rollout_status_name(artifact.status);
            }
            outcome.artifact = std::move(artifact);
        } catch (const StoreError&) {
            throw;  // systemic: abort the unit
        } catch (const std::exception& e) {
            outcome.status = "failure";
            outcome.metric_values["error"] = e.what();
        }

        price_records(outcome.telemetry, options_.pricing);
        outcome.duration_s = options_.clock->monotonic_seconds() - started;
        if (outcome.aggregate_value.has_value()) {
            outcome.metric_values["aggregate_value"] = *outcome.aggregate_value;
        }
        return outcome;
    }

    void compute_metric(const Unit& unit, const MetricConfig& metric_cfg,
                        const judge::JudgeConfig& judge_cfg, const core::RolloutArtifact& artifact,
                        model::ModelClient* judge_client,
                        const std::optional<lexdiv::HumanAnchor>& anchor,
                        EpisodeOutcome& outcome) {
        const MetricInfo& info = metric_registry().at(unit.metric);
        if (!info.is_judge) {
            const auto metric_id = lexdiv::metric_id_from_name(unit.metric);
            const lexdiv::TokenSequence tokens = lexdiv::tokenize(
                core::user_side_text(*artifact.synthetic), metric_cfg.tokenizer);
            const lexdiv::LexOutcome lex =
                lexdiv::evaluate_metric(*metric_id, tokens, metric_cfg.lex);
            outcome.metric_values["unstable"] = lex.unstable;
            if (!lex.reason.empty()) outcome.metric_values["stability_reason"] = lex.reason;
            if (lex.value.has_value()) {
                outcome.metric_values["raw"] = *lex.value;
                const lexdiv::ZScore z = lexdiv::zscore(*lex.value, *anchor);
                outcome.metric_values["degenerate"] = z.degenerate;
                if (!z.degenerate) {
                    outcome.metric_values["z"] = z.value;
                    if (!lex.unstable || metric_cfg.include_unstable) {
                        outcome.aggregate_value = z.value;
                    }
                }
            }
            return;
        }

        if (judge_client == nullptr) {
            throw ConfigError("judge metric without judge client: " + unit.metric);
        }
        judge::EpisodeJudgeResult result;
        if (unit.metric == "gteval") {
            result = judge::gteval(artifact, judge_cfg, *judge_client, pack_);
        } else if (unit.metric == "pi") {
            result = judge::pi_win_rate(artifact, judge_cfg, *judge_client, pack_);
        } else {
            result = judge::rnr(artifact, judge_cfg, *judge_client, pack_);
        }
        const json detail = judge::repetitions_to_json(result);
        for (const auto& [key, value] : detail.items()) outcome.metric_values[key] = value;
        outcome.aggregate_value = result.value;
        outcome.telemetry.insert(outcome.telemetry.end(), result.telemetry.begin(),
                                 result.telemetry.end());
    }

    void persist_episode(const Unit& unit, const EpisodeOutcome& outcome) {
        EpisodeRow row;
        row.run_id = run_id_;
        row.unit_id = unit.unit_id;
        row.episode_id = outcome.episode_id;
        row.status = outcome.status;
        row.duration_s = outcome.duration_s;
        row.artifact_path = outcome.artifact_rel;
        row.summary = unit.metric + " on " + outcome.episode_id + ": " + outcome.status;
        row.metric_values = outcome.metric_values.dump();
        row.telemetry_json = telemetry_to_json(outcome.telemetry).dump();
        store_.upsert_episode(row);
        const std::size_t done = ++episode_counter_;
        if (options_.episode_hook) options_.episode_hook(done);
    }

    void apply_controls(const Unit& unit, const MetricConfig& metric_cfg,
                        const judge::JudgeConfig& judge_cfg, model::ModelClient& judge_client,
                        std::vector<EpisodeOutcome>& outcomes, json& extras) {
        // RNR has no HH/PP pair; its control is the reference upper bound.
        if (unit.metric == "rnr") {
            double sum = 0.0;
            std::size_t n = 0;
            for (EpisodeOutcome& outcome : outcomes) {
                if (!outcome.artifact.has_value() ||
                    outcome.artifact->status != core::RolloutStatus::kSuccess) {
                    continue;
                }
                judge::EpisodeJudgeResult bound =
                    judge::rnr_on_reference(*outcome.artifact, judge_cfg, judge_client, pack_);
                if (!bound.value.has_value()) continue;
                outcome.metric_values["rnr_reference"] = *bound.value;
                price_records(bound.telemetry, options_.pricing);
                outcome.telemetry.insert(outcome.telemetry.end(), bound.telemetry.begin(),
                                         bound.telemetry.end());
                persist_episode(unit, outcome);
                sum += *bound.value;
                ++n;
            }
            if (n > 0) {
                extras["human_reference_mean"] = sum / static_cast<double>(n);
                extras["controls_n"] = n;
            }
            return;
        }

        std::vector<const core::RolloutArtifact*> artifacts;
        std::map<std::string, EpisodeOutcome*> by_id;
        for (EpisodeOutcome& outcome : outcomes) {
            if (outcome.artifact.has_value() &&
                outcome.artifact->status == core::RolloutStatus::kSuccess) {
                artifacts.push_back(&*outcome.artifact);
                by_id[outcome.episode_id] = &outcome;
            }
        }
        const auto stats = judge::compute_controls(
            artifacts, unit.metric, judge_cfg, judge_client, pack_,
            [&](const judge::EpisodeControls& controls) {
                EpisodeOutcome* outcome = by_id.at(controls.episode_id);
                outcome->metric_values["hh"] = controls.hh;
                outcome->metric_values["pp"] = controls.pp;
                std::vector<core::TelemetryRecord> records = controls.telemetry;
                price_records(records, options_.pricing);
                outcome->telemetry.insert(outcome->telemetry.end(), records.begin(),
                                          records.end());
                persist_episode(unit, *outcome);
            });
        if (stats.has_value()) {
            extras["mu_hh"] = stats->mu_hh;
            extras["mu_pp"] = stats->mu_pp;
            extras["controls_n"] = stats->n;
            extras["epsilon"] = stats->epsilon;
        } else {
            extras["controls_unavailable"] = true;
        }
    }

    void finalize_unit(const Unit& unit, const MetricConfig& metric_cfg,
                       const std::vector<EpisodeOutcome>& outcomes,
                       const std::optional<lexdiv::HumanAnchor>& anchor,
                       std::size_t anchor_excluded, const json& controls_extras) {
        std::vector<double> values;
        std::size_t failed_episodes = 0;
        std::size_t unstable_excluded = 0;
        std::size_t degenerate_excluded = 0;
        double raw_sum = 0.0;
        std::size_t raw_n = 0;
        for (const EpisodeOutcome& outcome : outcomes) {
            if (outcome.status != "success") {
                ++failed_episodes;
                continue;
            }
            if (outcome.aggregate_value.has_value()) {
                values.push_back(*outcome.aggregate_value);
            } else if (outcome.metric_values.value("degenerate", false)) {
                ++degenerate_excluded;
            } else if (outcome.metric_values.value("unstable", false)) {
                ++unstable_excluded;
            } else {
                ++failed_episodes;
            }
            if (outcome.metric_values.contains("raw")) {
                raw_sum += outcome.metric_values.at("raw").get<double>();
                ++raw_n;
            }
        }

        MetricRow row;
        row.run_id = run_id_;
        row.unit_id = unit.unit_id;
        row.metric = unit.metric;
        json extras = controls_extras;
        extras["failed_episodes"] = failed_episodes;
        if (anchor.has_value()) {
            extras["anchor_mu"] = anchor->mu;
            extras["anchor_sigma"] = anchor->sigma;
            extras["anchor_n"] = anchor->n;
            if (anchor_excluded > 0) extras["anchor_excluded"] = anchor_excluded;
            if (unstable_excluded > 0) extras["unstable_excluded"] = unstable_excluded;
            if (degenerate_excluded > 0) extras["degenerate_excluded"] = degenerate_excluded;
            if (raw_n > 0) extras["raw_mean"] = raw_sum / static_cast<double>(raw_n);
        }

        if (!values.empty()) {
            AggregateOptions agg_options;
            agg_options.bootstrap = metric_cfg.bootstrap;
            agg_options.bootstrap_seed = static_cast<std::uint64_t>(unit.seed);
            const MetricAggregate agg = aggregate(values, agg_options);
            row.mean = agg.mean;
            row.standard_deviation = agg.standard_deviation;
            row.confidence_interval = agg.ci_half_width;
            row.sample_size = static_cast<std::int64_t>(agg.sample_size);
            for (const auto& [key, value] : agg.extras.items()) extras[key] = value;
            if (unit.metric == "pi") extras["delta_mean"] = agg.mean - 0.5;
            if (controls_extras.contains("mu_hh")) {
                judge::CalibrationStats stats;
                stats.mu_hh = controls_extras.at("mu_hh").get<double>();
                stats.mu_pp = controls_extras.at("mu_pp").get<double>();
                stats.n = controls_extras.at("controls_n").get<std::size_t>();
                extras["calibrated_mean"] = judge::calibrate(agg.mean, stats);
                if (unit.metric == "gteval") extras["calibrated_informational"] = true;
            }
        } else {
            extras["aggregate_missing"] = true;
        }
        row.extras = extras.dump();

        store_.upsert_metric(row);
        write_unit_telemetry(unit, outcomes);
        store_.set_unit_status(run_id_, unit.unit_id, "completed");
    }

    void write_unit_telemetry(const Unit& unit, const std::vector<EpisodeOutcome>& outcomes) {
        struct RoleTotals {
            std::uint64_t calls = 0;
            std::uint64_t cache_hits = 0;
            std::uint64_t input_tokens = 0;
            std::uint64_t output_tokens = 0;
            double latency_s = 0.0;
            double cost_usd = 0.0;
        };
        std::map<std::string, RoleTotals> totals;
        for (const EpisodeOutcome& outcome : outcomes) {
            for (const core::TelemetryRecord& record : outcome.telemetry) {
                RoleTotals& t = totals[core::telemetry_role_name(record.role)];
                ++t.calls;
                if (record.cached) ++t.cache_hits;
                t.input_tokens += record.input_tokens;
                t.output_tokens += record.output_tokens;
                t.latency_s += record.latency_s;
                if (record.cost_usd.has_value()) t.cost_usd += *record.cost_usd;
            }
        }
        const auto put = [&](const std::string& key, const json& value) {
            store_.upsert_telemetry(TelemetryRow{run_id_, unit.unit_id, key, value.dump()});
        };
        for (const auto& [role, t] : totals) {
            put("calls." + role, t.calls);
            put("cache_hits." + role, t.cache_hits);
            put("input_tokens." + role, t.input_tokens);
            put("output_tokens." + role, t.output_tokens);
            put("latency_s." + role, t.latency_s);
            put("cost_usd." + role, t.cost_usd);
        }
    }

    void run_parallel(std::size_t count, const std::function<void(std::size_t)>& task) {
        const std::size_t workers = std::min(config_.run.max_concurrency, count);
        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    {
                        std::lock_guard lock(error_mutex);
                        if (first_error) return;
                    }
                    const std::size_t index = next.fetch_add(1);
                    if (index >= count) return;
                    try {
                        task(index);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (std::thread& thread : pool) thread.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    RunStore& store_;
    const JobConfig& config_;
    const ControllerOptions& options_;
    const rollout::PromptPack& pack_;
    const ArtifactManager& artifacts_;
    std::string run_id_;
    std::atomic<std::size_t>& episode_counter_;
};

}  // namespace

RunController::RunController(RunStore& store, JobConfig config, ControllerOptions options)
    : store_(store), config_(std::move(config)), options_(std::move(options)),
      pack_(config_.prompt_pack_dir.empty()
                ? rollout::PromptPack::builtin()
                : rollout::PromptPack::from_directory(config_.prompt_pack_dir, "custom")) {
    if (options_.artifacts_dir.empty()) {
        const fs::path store_path(store_.path());
        options_.artifacts_dir = (store_path.parent_path() / "run_data").string();
    }
}

PlanManifest RunController::make_plan() {
    std::map<std::string, DatasetFacts> facts;
    for (const DatasetConfig& dataset : config_.datasets) {
        DatasetFacts f;
        try {
            f.episode_count = core::read_episodes_jsonl(dataset.path, dataset.limit).size();
        } catch (const StoreError&) {
            f.episode_count = 0;
        }
        facts[dataset.name] = f;
    }
    const std::string run_id =
        options_.run_id.has_value() ? *options_.run_id : generate_run_id(*options_.clock);
    PlanManifest manifest = plan(config_, facts, run_id,
                                 strings::iso8601_utc(options_.clock->now_unix_seconds()));

    const fs::path dir = fs::path(options_.artifacts_dir) / "manifests";
    fs::create_directories(dir);
    manifest_path_ = (dir / (run_id + ".json")).string();
    save_manifest(manifest, manifest_path_);
    return manifest;
}

std::string RunController::run(const PlanManifest& manifest) {
    const std::string& run_id = manifest.run_id;

    const auto existing = store_.get_run(run_id);
    if (existing.has_value()) {
        // Resume path: the stored run must come from the same configuration.
        if (config_hash(config_) != manifest.config_hash) {
            throw ConfigError("manifest config_hash does not match the supplied config");
        }
        store_.set_run_status(run_id, "running");
    } else {
        RunRow row;
        row.run_id = run_id;
        row.created_at = manifest.created_at;
        row.status = "running";
        row.engine = config_.run.backend;
        row.planner_version = kPlannerVersion;
        store_.upsert_run(row);
    }

    // Insert any units not yet present; completed units keep their status.
    std::map<std::string, std::string> unit_status;
    for (const UnitRow& row : store_.units_for_run(run_id)) {
        unit_status[row.unit_id] = row.status;
    }
    for (const Unit& unit : manifest.units) {
        if (unit_status.count(unit.unit_id) == 0) {
            UnitRow row;
            row.run_id = run_id;
            row.unit_id = unit.unit_id;
            row.user_proxy = unit.user_proxy;
            row.dataset = unit.dataset;
            row.metric = unit.metric;
            row.seed = unit.seed;
            row.judge = unit.judge;
            row.status = "pending";
            store_.upsert_unit(row);
            unit_status[unit.unit_id] = "pending";
        }
    }

    // The unit owning a rollout (and its telemetry) is the first, in manifest
    // order, among units sharing (proxy, dataset, seed).
    std::map<std::string, std::string> rollout_owner;
    for (const Unit& unit : manifest.units) {
        const std::string key =
            unit.user_proxy + "|" + unit.dataset + "|" + std::to_string(unit.seed);
        rollout_owner.emplace(key, unit.unit_id);
    }

    ArtifactManager artifacts(options_.artifacts_dir);
    std::atomic<std::size_t> episode_counter{0};
    try {
        UnitExecutor executor(store_, config_, options_, pack_, artifacts, run_id,
                              episode_counter);
        for (const Unit& unit : manifest.units) {
            if (unit_status[unit.unit_id] == "completed") continue;
            const std::string key =
                unit.user_proxy + "|" + unit.dataset + "|" + std::to_string(unit.seed);
            executor.execute(unit, rollout_owner.at(key) == unit.unit_id);
        }

        apply_baseline_p_values(run_id);
        write_scorecards(run_id);

        const auto units = store_.units_for_run(run_id);
        std::size_t completed = 0;
        for (const UnitRow& row : units) {
            if (row.status == "completed") ++completed;
        }
        const json summary{{"units_total", units.size()},
                           {"units_completed", completed},
                           {"episode_row_writes", episode_counter.load()}};
        store_.set_run_summary(run_id, summary.dump());
        store_.set_run_status(run_id, "completed");
        store_.set_last_run(run_id);
    } catch (...) {
        try {
            store_.set_run_status(run_id, "failed");
        } catch (...) {
        }
        throw;
    }
    return run_id;
}

std::string RunController::plan_and_run() {
    return run(make_plan());
}

void RunController::apply_baseline_p_values(const std::string& run_id) {
    if (config_.run.baseline_proxy.empty()) return;
    const std::string& baseline = config_.run.baseline_proxy;

    const auto values_for_unit = [&](const std::string& unit_id) {
        std::vector<double> values;
        for (const EpisodeRow& row : store_.episodes_for_unit(run_id, unit_id)) {
            const json mv = json::parse(row.metric_values, nullptr, false);
            if (!mv.is_discarded() && mv.contains("aggregate_value")) {
                values.push_back(mv.at("aggregate_value").get<double>());
            }
        }
        return values;
    };

    const auto units = store_.units_for_run(run_id);
    for (const UnitRow& unit : units) {
        if (unit.user_proxy == baseline || unit.status != "completed") continue;
        const std::string baseline_unit_id =
            make_unit_id(baseline, unit.dataset, unit.metric, unit.seed);
        const auto baseline_it =
            std::find_if(units.begin(), units.end(), [&](const UnitRow& row) {
                return row.unit_id == baseline_unit_id && row.status == "completed";
            });
        if (baseline_it == units.end()) continue;
        const std::vector<double> mine = values_for_unit(unit.unit_id);
        const std::vector<double> theirs = values_for_unit(baseline_unit_id);
        if (mine.size() < 2 || theirs.size() < 2) continue;

        for (MetricRow row : store_.metrics_for_run(run_id)) {
            if (row.unit_id != unit.unit_id) continue;
            row.p_value = welch_p_value(mine, theirs);
            json extras = json::parse(row.extras, nullptr, false);
            if (extras.is_discarded()) extras = json::object();
            extras["p_value_test"] = "welch_t_two_sided_vs_" + baseline;
            row.extras = extras.dump();
            store_.upsert_metric(row);
        }
    }
}

void RunController::write_scorecards(const std::string& run_id) {
    if (config_.scorecards.empty()) return;
    const auto metric_rows = store_.metrics_for_run(run_id);

    // Group means by (proxy, dataset, seed).
    struct Group {
        std::string proxy;
        std::string dataset;
        std::int64_t seed = 0;
        std::map<std::string, double> means;
    };
    std::map<std::string, Group> groups;
    const auto units = store_.units_for_run(run_id);
    for (const UnitRow& unit : units) {
        if (unit.status != "completed") continue;
        for (const MetricRow& row : metric_rows) {
            if (row.unit_id != unit.unit_id) continue;
            const json extras = json::parse(row.extras, nullptr, false);
            if (!extras.is_discarded() && extras.value("aggregate_missing", false)) continue;
            const std::string key =
                unit.user_proxy + "|" + unit.dataset + "|" + std::to_string(unit.seed);
            Group& group = groups[key];
            group.proxy = unit.user_proxy;
            group.dataset = unit.dataset;
            group.seed = unit.seed;
            group.means[unit.metric] = row.mean;
        }
    }

    for (const auto& [card_name, weights] : config_.scorecards) {
        for (const auto& [key, group] : groups) {
            Scorecard card;
            try {
                card = compute_scorecard(card_name, group.means, weights);
            } catch (const ValidationError&) {
                continue;  // every weighted metric missing for this group
            }
            ScorecardRow row;
            row.run_id = run_id;
            row.name = card_name + "|" + key;
            row.score = card.score;
            json weights_json = json::object();
            for (const auto& [metric, weight] : card.weights) weights_json[metric] = weight;
            row.weights = weights_json.dump();
            row.missing_metrics = json(card.missing_metrics).dump();
            row.extras = json{{"scorecard", card_name},
                              {"user_proxy", group.proxy},
                              {"dataset", group.dataset},
                              {"seed", group.seed}}
                             .dump();
            store_.upsert_scorecard(row);
        }
    }
}

}  // namespace mirrorbench::orchestrate
