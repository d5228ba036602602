#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mirrorbench/core/types.hpp"

namespace mirrorbench::data {

struct RawMessage {
    std::string role;  // upstream role label; "user"/"human" vs "assistant"/others
    std::string text;
};

struct RawConversation {
    std::string source_id;
    std::vector<RawMessage> messages;
    std::optional<std::string> language_tag;
    std::map<std::string, std::string> extras;  // topic, facet, goal, ...
};

enum class RejectReason { kNonEnglish, kTooShort, kEmptyAfterNormalization };

const char* reject_reason_name(RejectReason reason);

struct EpisodeCandidate {
    core::Dialogue dialogue;
    std::optional<std::string> upstream_goal;
    std::map<std::string, std::string> extras;
    std::string source_id;
};

struct NormalizeOptions {
    // Accepted dialogues need at least this many messages after normalization
    // (two messages = one complete exchange).
    std::size_t min_messages = 2;
    bool require_english = true;
    // Used when language_tag is absent; default accepts ASCII-dominant text.
    std::function<bool(const std::string&)> english_detector;
};

using NormalizeResult = std::variant<EpisodeCandidate, RejectReason>;

// Normalizes a raw conversation into an alternating dialogue: drops empty
// messages and leading assistant messages, merges consecutive same-role
// messages with newline joins, truncates a trailing unpaired user turn, and
// applies the language and length filters.
NormalizeResult normalize(const RawConversation& raw, const NormalizeOptions& options = {});

}  // namespace mirrorbench::data
