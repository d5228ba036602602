#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mirrorbench/common/clock.hpp"
#include "mirrorbench/core/types.hpp"
#include "mirrorbench/model/client.hpp"
#include "mirrorbench/rollout/prompts.hpp"

namespace mirrorbench::rollout {

struct RolloutConfig {
    std::string user_proxy_model;
    std::string assistant_model;
    double temperature = 0.0;
    std::uint64_t max_tokens = 2048;
    std::string prompt_pack_version;
    double episode_budget_s = 300.0;  // wall clock per episode
    std::optional<std::int64_t> seed_hint;
};

// Synthesizes a proxy-assistant dialogue matched turn-for-turn to the
// reference. The proxy sees only its system message (goal) plus the synthetic
// history with roles inverted (its own prior utterances arrive as assistant
// messages, the assistant's replies as user messages) so a chat model can
// produce the USER side. The assistant sees its system message (embedding the
// labeled reference transcript) plus the synthetic history in natural roles.
// The reference transcript never enters a proxy request.
core::RolloutArtifact run_episode(const core::Episode& episode, const RolloutConfig& config,
                                  model::ModelClient& proxy_client,
                                  model::ModelClient& assistant_client, const PromptPack& pack,
                                  const Clock& clock);

// Artifact persistence: one JSON file per episode.
void save_artifact(const core::RolloutArtifact& artifact, const std::string& path);
core::RolloutArtifact load_artifact(const std::string& path);

}  // namespace mirrorbench::rollout
