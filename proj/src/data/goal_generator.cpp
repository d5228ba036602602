#include "mirrorbench/data/goal_generator.hpp"

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/strings.hpp"

namespace mirrorbench::data {

core::GoalSpec generate_goal(const core::Dialogue& dialogue, const std::string& goal_model,
                             model::ModelClient& client, const rollout::PromptPack& pack) {
    const std::string prompt =
        rollout::render(pack.get(rollout::kGoalSynthesis),
                        {{"conversation", rollout::render_conversation(dialogue)}});
    model::ModelRequest request;
    request.model = goal_model;
    request.messages.push_back({model::ChatRole::kUser, prompt});
    request.cache_namespace = "goal";
    const model::ModelResponse response = client.complete(request);

    const std::string text = strings::trim(response.text);
    if (text.empty()) {
        throw ValidationError("goal generator returned an empty response");
    }
    core::GoalSpec goal;
    goal.text = text;
    goal.source = core::GoalSource::kGenerated;
    goal.generator_model = goal_model;
    return goal;
}

}  // namespace mirrorbench::data
