#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mirrorbench/data/normalize.hpp"
#include "mirrorbench/data/stratify.hpp"
#include "mirrorbench/model/client.hpp"
#include "mirrorbench/rollout/prompts.hpp"

namespace mirrorbench::data {

// Generic raw-corpus JSONL adapter. Each line is an object with
// `messages` (or `conversation`): [{role, text|content}], optional
// `source_id`/`id`, `language`/`lang`, and arbitrary scalar extras
// (topic, facet, goal, clarification_pairs, ...).
std::vector<RawConversation> read_raw_jsonl(const std::string& path);

struct PrepareOptions {
    std::string dataset_id;
    StratificationRule rule;
    std::size_t cap = 200;
    std::size_t min_per_stratum = 0;
    std::uint64_t seed = 0;
    NormalizeOptions normalize;
    // When set, episodes lacking an upstream goal get one synthesized by this
    // model; otherwise such episodes are excluded as goal-missing.
    model::ModelClient* goal_client = nullptr;
    std::string goal_model;
    const rollout::PromptPack* prompts = nullptr;
};

struct PrepareReport {
    std::vector<core::Episode> episodes;
    SamplingPlan plan;
    std::map<std::string, std::size_t> rejections;  // reason -> count
    std::size_t goal_missing = 0;
};

// Full preparation pipeline: normalize, stratify, sample, attach goals.
// episode_id is "<dataset>/<source-id>".
PrepareReport prepare_dataset(const std::vector<RawConversation>& raw,
                              const PrepareOptions& options);

// Sampling-plan JSON: {dataset_id, rule, cap, min_per_stratum, seed,
// allocations, rejections, goal_missing}.
nlohmann::json prepare_report_json(const PrepareReport& report, const PrepareOptions& options);

}  // namespace mirrorbench::data
