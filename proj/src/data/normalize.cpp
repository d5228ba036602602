#include "mirrorbench/data/normalize.hpp"

#include "mirrorbench/common/strings.hpp"

namespace mirrorbench::data {

namespace {

bool is_user_role(const std::string& role) {
    const std::string lowered = strings::to_lower_ascii(role);
    return lowered == "user" || lowered == "human" || lowered == "prompter";
}

bool default_english_detector(const std::string& text) {
    return strings::ascii_fraction(text) >= 0.9;
}

}  // namespace

const char* reject_reason_name(RejectReason reason) {
    switch (reason) {
        case RejectReason::kNonEnglish: return "non_english";
        case RejectReason::kTooShort: return "too_short";
        case RejectReason::kEmptyAfterNormalization: return "empty_after_normalization";
    }
    return "empty_after_normalization";
}

NormalizeResult normalize(const RawConversation& raw, const NormalizeOptions& options) {
    // Language filter first: an explicit tag wins, otherwise the detector
    // sees the concatenated message text.
    if (options.require_english) {
        if (raw.language_tag.has_value()) {
            const std::string tag = strings::to_lower_ascii(*raw.language_tag);
            if (tag != "en" && tag.rfind("en-", 0) != 0 && tag != "english") {
                return RejectReason::kNonEnglish;
            }
        } else {
            std::string joined;
            for (const RawMessage& message : raw.messages) {
                joined += message.text;
                joined.push_back('\n');
            }
            const auto& detector =
                options.english_detector ? options.english_detector : default_english_detector;
            if (!detector(joined)) return RejectReason::kNonEnglish;
        }
    }

    // Drop messages that are empty after trimming, then merge consecutive
    // same-role messages with newline joins.
    std::vector<core::Turn> merged;
    for (const RawMessage& message : raw.messages) {
        const std::string text = strings::trim(message.text);
        if (text.empty()) continue;
        const core::Role role = is_user_role(message.role) ? core::Role::kUser
                                                           : core::Role::kAssistant;
        if (!merged.empty() && merged.back().role == role) {
            merged.back().text += "\n" + text;
        } else {
            merged.push_back(core::Turn{role, text, merged.size() + 1});
        }
    }

    // Drop leading assistant messages.
    std::size_t begin = 0;
    while (begin < merged.size() && merged[begin].role == core::Role::kAssistant) ++begin;
    merged.erase(merged.begin(), merged.begin() + static_cast<std::ptrdiff_t>(begin));

    // Truncate a trailing unpaired user turn.
    if (merged.size() % 2 == 1) merged.pop_back();

    if (merged.empty()) return RejectReason::kEmptyAfterNormalization;
    if (merged.size() < options.min_messages) return RejectReason::kTooShort;

    for (std::size_t i = 0; i < merged.size(); ++i) merged[i].index = i + 1;

    EpisodeCandidate candidate{core::Dialogue::create(std::move(merged)), std::nullopt,
                               raw.extras, raw.source_id};
    const auto goal_it = raw.extras.find("goal");
    if (goal_it != raw.extras.end() && !strings::trim(goal_it->second).empty()) {
        candidate.upstream_goal = goal_it->second;
    }
    return candidate;
}

}  // namespace mirrorbench::data
