#include "mirrorbench/core/types.hpp"

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/strings.hpp"

namespace mirrorbench::core {

const char* role_name(Role role) {
    return role == Role::kUser ? "user" : "assistant";
}

AlternationCheck validate_alternation(const std::vector<Turn>& turns) {
    if (turns.empty()) {
        return {false, 0, "dialogue has no turns"};
    }
    for (std::size_t i = 0; i < turns.size(); ++i) {
        const Role expected = (i % 2 == 0) ? Role::kUser : Role::kAssistant;
        if (turns[i].role != expected) {
            if (i == 0) return {false, 1, "must start with user"};
            return {false, i + 1,
                    expected == Role::kUser ? "expected user" : "expected assistant"};
        }
        if (strings::trim(turns[i].text).empty()) {
            return {false, i + 1, "turn text empty after trim"};
        }
    }
    if (turns.size() % 2 != 0) {
        return {false, turns.size(), "trailing unpaired user turn"};
    }
    return {true, 0, ""};
}

Dialogue Dialogue::create(std::vector<Turn> turns) {
    for (std::size_t i = 0; i < turns.size(); ++i) turns[i].index = i + 1;
    const AlternationCheck check = validate_alternation(turns);
    if (!check.ok) {
        throw ValidationError("invalid dialogue at index " +
                              std::to_string(check.violating_index) + ": " + check.reason);
    }
    return Dialogue(std::move(turns));
}

std::string user_side_text(const Dialogue& dialogue) {
    std::string out;
    for (std::size_t i = 0; i < dialogue.length(); ++i) {
        const std::string piece = strings::trim(dialogue.user_turn(i).text);
        if (!out.empty()) out.push_back(' ');
        out += piece;
    }
    return out;
}

const char* rollout_status_name(RolloutStatus status) {
    switch (status) {
        case RolloutStatus::kSuccess: return "success";
        case RolloutStatus::kFailure: return "failure";
        case RolloutStatus::kTimeout: return "timeout";
    }
    return "failure";
}

RolloutStatus rollout_status_from_name(const std::string& name) {
    if (name == "success") return RolloutStatus::kSuccess;
    if (name == "timeout") return RolloutStatus::kTimeout;
    return RolloutStatus::kFailure;
}

const char* telemetry_role_name(TelemetryRole role) {
    switch (role) {
        case TelemetryRole::kUserProxy: return "user_proxy";
        case TelemetryRole::kAssistant: return "assistant";
        case TelemetryRole::kJudge: return "judge";
        case TelemetryRole::kGoalGenerator: return "goal_generator";
    }
    return "user_proxy";
}

RolloutArtifact RolloutArtifact::create(Episode episode, std::optional<Dialogue> synthetic,
                                        std::vector<TelemetryRecord> telemetry,
                                        RolloutStatus status) {
    if (status == RolloutStatus::kSuccess) {
        if (!synthetic.has_value()) {
            throw ValidationError("successful rollout requires a synthetic transcript");
        }
        if (synthetic->length() != episode.reference.length()) {
            throw ValidationError("successful rollout must match reference length: got " +
                                  std::to_string(synthetic->length()) + ", expected " +
                                  std::to_string(episode.reference.length()));
        }
    }
    return RolloutArtifact{std::move(episode), std::move(synthetic), std::move(telemetry),
                           status, /*sanitized_prefixes=*/false, /*prompt_pack_version=*/{}};
}

}  // namespace mirrorbench::core
