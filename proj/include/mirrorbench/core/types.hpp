#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mirrorbench::core {

enum class Role { kUser, kAssistant };

const char* role_name(Role role);

// One dialogue message. `index` is the 1-based position within the dialogue.
struct Turn {
    Role role = Role::kUser;
    std::string text;
    std::size_t index = 1;
};

struct AlternationCheck {
    bool ok = false;
    std::size_t violating_index = 0;  // 1-based; 0 when ok
    std::string reason;
};

// Total check: turns must alternate user, assistant, ... with equal counts
// and at least one complete pair. Reports the first violating index.
AlternationCheck validate_alternation(const std::vector<Turn>& turns);

// An alternating user/assistant conversation. Immutable after construction;
// construction enforces the alternation invariant.
class Dialogue {
public:
    // Throws ValidationError when the turn sequence does not alternate.
    static Dialogue create(std::vector<Turn> turns);

    const std::vector<Turn>& turns() const { return turns_; }
    // Number of (user, assistant) pairs.
    std::size_t length() const { return turns_.size() / 2; }

    const Turn& user_turn(std::size_t pair_index) const { return turns_[2 * pair_index]; }
    const Turn& assistant_turn(std::size_t pair_index) const { return turns_[2 * pair_index + 1]; }

private:
    explicit Dialogue(std::vector<Turn> turns) : turns_(std::move(turns)) {}
    std::vector<Turn> turns_;
};

// User turns, trimmed per turn, joined by single spaces. Assistant text never
// appears in the result.
std::string user_side_text(const Dialogue& dialogue);

enum class GoalSource { kGiven, kGenerated };

struct GoalSpec {
    std::string text;
    GoalSource source = GoalSource::kGiven;
    std::optional<std::string> generator_model;
};

// One reference human dialogue plus its goal and metadata; the atomic
// evaluation item. episode_id convention: "<dataset>/<source-id>".
struct Episode {
    std::string episode_id;
    Dialogue reference;
    GoalSpec goal;
    std::map<std::string, std::string> meta;
};

enum class RolloutStatus { kSuccess, kFailure, kTimeout };

const char* rollout_status_name(RolloutStatus status);
RolloutStatus rollout_status_from_name(const std::string& name);

enum class TelemetryRole { kUserProxy, kAssistant, kJudge, kGoalGenerator };

const char* telemetry_role_name(TelemetryRole role);

struct TelemetryRecord {
    TelemetryRole role = TelemetryRole::kUserProxy;
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;
    double latency_s = 0.0;
    std::string model;
    bool cached = false;
    std::optional<double> cost_usd;
};

// A synthetic transcript bound to its reference episode. Successful artifacts
// are checked for turn parity on construction.
struct RolloutArtifact {
    // Throws ValidationError if status is success and synthetic length does
    // not match the reference. Failed rollouts keep the completed pairs, or
    // nothing when the first pair never completed.
    static RolloutArtifact create(Episode episode, std::optional<Dialogue> synthetic,
                                  std::vector<TelemetryRecord> telemetry, RolloutStatus status);

    Episode episode;
    std::optional<Dialogue> synthetic;  // absent for failed rollouts with no complete pair
    std::vector<TelemetryRecord> telemetry;
    RolloutStatus status = RolloutStatus::kFailure;
    bool sanitized_prefixes = false;
    std::string prompt_pack_version;
};

}  // namespace mirrorbench::core
