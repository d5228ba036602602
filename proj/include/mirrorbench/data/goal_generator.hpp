#pragma once

#include <string>

#include "mirrorbench/core/types.hpp"
#include "mirrorbench/model/client.hpp"
#include "mirrorbench/rollout/prompts.hpp"

namespace mirrorbench::data {

// Derives a goal description from the reference transcript with the goal
// synthesis template. Responses are cached under the "goal" namespace.
// Throws ValidationError on an empty model response (goal-missing) and
// TransportError when the model fails after retries.
core::GoalSpec generate_goal(const core::Dialogue& dialogue, const std::string& goal_model,
                             model::ModelClient& client, const rollout::PromptPack& pack);

}  // namespace mirrorbench::data
