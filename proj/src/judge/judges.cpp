#include "mirrorbench/judge/judges.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/rng.hpp"

namespace mirrorbench::judge {

using nlohmann::json;

std::size_t default_judge_samples(const std::string& metric_name) {
    if (metric_name == "pi") return 3;
    if (metric_name == "rnr") return 2;
    return 1;
}

json repetitions_to_json(const EpisodeJudgeResult& result) {
    json reps = json::array();
    for (const RepetitionRecord& record : result.repetitions) {
        json row{{"verdict", record.verdict},
                 {"reasoning", record.reasoning},
                 {"failed", record.failed}};
        if (record.proxy_position.has_value()) row["proxy_position"] = *record.proxy_position;
        reps.push_back(std::move(row));
    }
    json doc{{"repetitions", reps}, {"failed_repetitions", result.failed_repetitions}};
    if (result.value.has_value()) doc["value"] = *result.value;
    if (result.delta.has_value()) doc["delta"] = *result.delta;
    return doc;
}

namespace {

const core::Dialogue& require_success(const core::RolloutArtifact& artifact) {
    if (artifact.status != core::RolloutStatus::kSuccess || !artifact.synthetic.has_value()) {
        throw ValidationError("judge metrics require a successful rollout artifact: " +
                              artifact.episode.episode_id);
    }
    return *artifact.synthetic;
}

// One judge call with a single automatic re-query on parse failure. The
// re-query carries an extra cache param so it does not replay the cached
// unparseable response.
std::optional<JudgeVerdict> query_verdict(model::ModelClient& client, const JudgeConfig& config,
                                          const std::string& ns, const std::string& prompt,
                                          std::map<std::string, std::string> extra_params,
                                          VerdictKind kind,
                                          std::vector<core::TelemetryRecord>& telemetry) {
    model::ModelRequest request;
    request.model = config.judge_model;
    request.temperature = config.temperature;
    request.cache_namespace = ns;
    request.messages.push_back({model::ChatRole::kUser, prompt});
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (attempt == 1) extra_params["requery"] = "1";
        model::ModelResponse response;
        try {
            response = client.complete(request, extra_params);
        } catch (const TransportError&) {
            return std::nullopt;  // repetition recorded as failed
        }
        core::TelemetryRecord record;
        record.role = core::TelemetryRole::kJudge;
        record.model = config.judge_model;
        record.input_tokens = response.usage.input_tokens;
        record.output_tokens = response.usage.output_tokens;
        record.latency_s = response.latency_s;
        record.cached = response.cached;
        telemetry.push_back(record);
        try {
            return parse_verdict(response.text, kind);
        } catch (const VerdictParseError&) {
            continue;
        }
    }
    return std::nullopt;
}

// Mean of c scored verdicts of the GTEval prompt over an (a, b) rendering
// pair; shared by scoring and the HH/PP controls.
EpisodeJudgeResult gteval_between(const std::string& real_rendering,
                                  const std::string& proxy_rendering, const JudgeConfig& config,
                                  model::ModelClient& client, const rollout::PromptPack& pack) {
    const std::string prompt =
        rollout::render(pack.get(rollout::kGtevalJudge),
                        {{"real_conversation", real_rendering},
                         {"proxy_conversation", proxy_rendering}});
    EpisodeJudgeResult result;
    double sum = 0.0;
    std::size_t successes = 0;
    for (std::size_t r = 0; r < config.num_judge_samples; ++r) {
        std::map<std::string, std::string> params{{"metric_id", "gteval"},
                                                  {"repetition_index", std::to_string(r)},
                                                  {"rubric_version", config.rubric_version}};
        const auto verdict = query_verdict(client, config, "gteval", prompt, std::move(params),
                                           VerdictKind::kScore, result.telemetry);
        RepetitionRecord record;
        if (verdict.has_value()) {
            record.verdict = std::to_string(verdict->score);
            record.reasoning = verdict->reasoning;
            sum += verdict->score;
            ++successes;
        } else {
            record.failed = true;
            ++result.failed_repetitions;
        }
        result.repetitions.push_back(std::move(record));
    }
    if (successes > 0) result.value = sum / static_cast<double>(successes);
    return result;
}

EpisodeJudgeResult pi_between(const std::string& proxy_rendering,
                              const std::string& reference_rendering,
                              const std::string& episode_id, const std::string& seed_context,
                              const JudgeConfig& config, model::ModelClient& client,
                              const rollout::PromptPack& pack) {
    EpisodeJudgeResult result;
    double sum = 0.0;
    std::size_t successes = 0;
    for (std::size_t r = 0; r < config.num_judge_samples; ++r) {
        std::mt19937_64 gen(rng::mix(config.rng_seed, seed_context + "|" + episode_id, r));
        const bool proxy_is_a = rng::uniform_below(gen, 2) == 0;
        const std::string position = proxy_is_a ? "A" : "B";

        const std::string prompt = rollout::render(
            pack.get(rollout::kPiJudge),
            {{"conversation_a", proxy_is_a ? proxy_rendering : reference_rendering},
             {"conversation_b", proxy_is_a ? reference_rendering : proxy_rendering}});
        std::map<std::string, std::string> params{{"metric_id", "pi"},
                                                  {"repetition_index", std::to_string(r)},
                                                  {"proxy_position", position},
                                                  {"rubric_version", config.rubric_version}};
        const auto verdict = query_verdict(client, config, "pi", prompt, std::move(params),
                                           VerdictKind::kChoice, result.telemetry);
        RepetitionRecord record;
        record.proxy_position = position;
        if (verdict.has_value()) {
            record.verdict = choice_name(verdict->choice);
            record.reasoning = verdict->reasoning;
            if (verdict->choice == Choice::kTie) {
                sum += 0.5;
            } else if ((verdict->choice == Choice::kA) == proxy_is_a) {
                sum += 1.0;
            }
            ++successes;
        } else {
            record.failed = true;
            ++result.failed_repetitions;
        }
        result.repetitions.push_back(std::move(record));
    }
    if (successes > 0) {
        result.value = sum / static_cast<double>(successes);
        result.delta = *result.value - 0.5;
    }
    return result;
}

EpisodeJudgeResult rnr_on(const std::string& rendering, const JudgeConfig& config,
                          model::ModelClient& client, const rollout::PromptPack& pack) {
    const std::string prompt =
        rollout::render(pack.get(rollout::kRnrJudge), {{"conversation", rendering}});
    EpisodeJudgeResult result;
    double sum = 0.0;
    std::size_t successes = 0;
    for (std::size_t r = 0; r < config.num_judge_samples; ++r) {
        std::map<std::string, std::string> params{{"metric_id", "rnr"},
                                                  {"repetition_index", std::to_string(r)},
                                                  {"rubric_version", config.rubric_version}};
        const auto verdict = query_verdict(client, config, "rnr", prompt, std::move(params),
                                           VerdictKind::kBinary, result.telemetry);
        RepetitionRecord record;
        if (verdict.has_value()) {
            record.verdict = verdict->yes ? "YES" : "NO";
            record.reasoning = verdict->reasoning;
            if (verdict->yes) sum += 1.0;
            ++successes;
        } else {
            record.failed = true;
            ++result.failed_repetitions;
        }
        result.repetitions.push_back(std::move(record));
    }
    if (successes > 0) result.value = sum / static_cast<double>(successes);
    return result;
}

}  // namespace

EpisodeJudgeResult gteval(const core::RolloutArtifact& artifact, const JudgeConfig& config,
                          model::ModelClient& client, const rollout::PromptPack& pack) {
    const core::Dialogue& synthetic = require_success(artifact);
    return gteval_between(rollout::render_conversation(artifact.episode.reference),
                          rollout::render_conversation(synthetic), config, client, pack);
}

EpisodeJudgeResult pi_win_rate(const core::RolloutArtifact& artifact, const JudgeConfig& config,
                               model::ModelClient& client, const rollout::PromptPack& pack) {
    const core::Dialogue& synthetic = require_success(artifact);
    return pi_between(rollout::render_conversation(synthetic),
                      rollout::render_conversation(artifact.episode.reference),
                      artifact.episode.episode_id, "pi", config, client, pack);
}

EpisodeJudgeResult rnr(const core::RolloutArtifact& artifact, const JudgeConfig& config,
                       model::ModelClient& client, const rollout::PromptPack& pack) {
    const core::Dialogue& synthetic = require_success(artifact);
    return rnr_on(rollout::render_conversation(synthetic), config, client, pack);
}

EpisodeJudgeResult rnr_on_reference(const core::RolloutArtifact& artifact,
                                    const JudgeConfig& config, model::ModelClient& client,
                                    const rollout::PromptPack& pack) {
    return rnr_on(rollout::render_conversation(artifact.episode.reference), config, client, pack);
}

std::optional<CalibrationStats> compute_controls(
    const std::vector<const core::RolloutArtifact*>& artifacts, const std::string& metric_name,
    const JudgeConfig& config, model::ModelClient& client, const rollout::PromptPack& pack,
    const ControlsCallback& on_episode) {
    if (metric_name != "gteval" && metric_name != "pi") {
        throw ConfigError("controls are defined for gteval and pi only, got " + metric_name);
    }
    double hh_sum = 0.0;
    double pp_sum = 0.0;
    std::size_t n = 0;
    for (const core::RolloutArtifact* artifact : artifacts) {
        if (artifact->status != core::RolloutStatus::kSuccess ||
            !artifact->synthetic.has_value()) {
            continue;
        }
        const std::string real = rollout::render_conversation(artifact->episode.reference);
        const std::string proxy = rollout::render_conversation(*artifact->synthetic);
        EpisodeJudgeResult hh_result;
        EpisodeJudgeResult pp_result;
        if (metric_name == "gteval") {
            hh_result = gteval_between(real, real, config, client, pack);
            pp_result = gteval_between(proxy, proxy, config, client, pack);
        } else {
            hh_result = pi_between(real, real, artifact->episode.episode_id, "pi-hh", config,
                                   client, pack);
            pp_result = pi_between(proxy, proxy, artifact->episode.episode_id, "pi-pp", config,
                                   client, pack);
        }
        if (!hh_result.value.has_value() || !pp_result.value.has_value()) continue;
        hh_sum += *hh_result.value;
        pp_sum += *pp_result.value;
        ++n;
        if (on_episode) {
            EpisodeControls controls;
            controls.episode_id = artifact->episode.episode_id;
            controls.hh = *hh_result.value;
            controls.pp = *pp_result.value;
            controls.telemetry = std::move(hh_result.telemetry);
            controls.telemetry.insert(controls.telemetry.end(), pp_result.telemetry.begin(),
                                      pp_result.telemetry.end());
            on_episode(controls);
        }
    }
    if (n == 0) return std::nullopt;
    CalibrationStats stats;
    stats.mu_hh = hh_sum / static_cast<double>(n);
    stats.mu_pp = pp_sum / static_cast<double>(n);
    stats.n = n;
    return stats;
}

double calibrate(double raw, const CalibrationStats& stats) {
    const double denom = std::max(stats.epsilon, stats.mu_hh - stats.mu_pp);
    const double value = (raw - stats.mu_pp) / denom;
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace mirrorbench::judge
