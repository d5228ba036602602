#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mirrorbench/core/types.hpp"
#include "mirrorbench/judge/verdict.hpp"
#include "mirrorbench/model/client.hpp"
#include "mirrorbench/rollout/prompts.hpp"

namespace mirrorbench::judge {

struct JudgeConfig {
    std::string judge_model;
    std::size_t num_judge_samples = 1;  // self-consistency parameter c
    double temperature = 0.0;
    bool compute_controls = false;
    std::uint64_t rng_seed = 0;  // PI position randomization
    std::string rubric_version;  // prompt pack version, part of the cache key
};

// Defaults: GTEval c=1, PI c=3, RNR c=2.
std::size_t default_judge_samples(const std::string& metric_name);

// One judge repetition kept for audit (verdict, reasoning, PI position).
struct RepetitionRecord {
    std::string verdict;    // "A"/"B"/"Tie", "YES"/"NO", or a score string
    std::string reasoning;
    std::optional<std::string> proxy_position;  // PI only
    bool failed = false;
};

struct EpisodeJudgeResult {
    std::optional<double> value;  // absent when every repetition failed
    std::optional<double> delta;  // PI only: w - 0.5
    std::vector<RepetitionRecord> repetitions;
    std::size_t failed_repetitions = 0;
    std::vector<core::TelemetryRecord> telemetry;  // one record per judge call
};

nlohmann::json repetitions_to_json(const EpisodeJudgeResult& result);

// Mean of c scored verdicts on (synthetic, reference). Requires a successful
// artifact.
EpisodeJudgeResult gteval(const core::RolloutArtifact& artifact, const JudgeConfig& config,
                          model::ModelClient& client, const rollout::PromptPack& pack);

// Per-episode pairwise win rate with seeded position randomization:
// w = mean over repetitions of [1 if verdict matches the proxy position,
// 0.5 for Tie, else 0]; delta = w - 0.5.
EpisodeJudgeResult pi_win_rate(const core::RolloutArtifact& artifact, const JudgeConfig& config,
                               model::ModelClient& client, const rollout::PromptPack& pack);

// Reference-free rubric verdicts mapped YES -> 1, NO -> 0, averaged over c.
EpisodeJudgeResult rnr(const core::RolloutArtifact& artifact, const JudgeConfig& config,
                       model::ModelClient& client, const rollout::PromptPack& pack);

// Same rubric applied to the human reference transcript; an empirical upper
// bound kept as a separate statistic.
EpisodeJudgeResult rnr_on_reference(const core::RolloutArtifact& artifact,
                                    const JudgeConfig& config, model::ModelClient& client,
                                    const rollout::PromptPack& pack);

// HH/PP anchors for affine judge calibration.
struct CalibrationStats {
    double mu_hh = 0.0;
    double mu_pp = 0.0;
    std::size_t n = 0;
    double epsilon = 1e-6;
};

// Per-episode control values reported through the optional callback.
struct EpisodeControls {
    std::string episode_id;
    double hh = 0.0;
    double pp = 0.0;
    std::vector<core::TelemetryRecord> telemetry;
};

using ControlsCallback = std::function<void(const EpisodeControls&)>;

// Judge self-comparisons over the successful artifacts: HH scores the
// reference against itself, PP the synthetic transcript against itself (PI
// still randomizes A/B order between the identical copies). Returns nullopt
// when no episode produced both control values.
std::optional<CalibrationStats> compute_controls(
    const std::vector<const core::RolloutArtifact*>& artifacts, const std::string& metric_name,
    const JudgeConfig& config, model::ModelClient& client, const rollout::PromptPack& pack,
    const ControlsCallback& on_episode = nullptr);

// clip((raw - mu_PP) / max(epsilon, mu_HH - mu_PP), 0, 1).
double calibrate(double raw, const CalibrationStats& stats);

}  // namespace mirrorbench::judge
