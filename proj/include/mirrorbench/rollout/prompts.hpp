#pragma once

#include <map>
#include <string>

#include "mirrorbench/core/types.hpp"

namespace mirrorbench::rollout {

// Template names used by the pipeline.
inline constexpr const char* kUserProxySystem = "user_proxy_system";
inline constexpr const char* kAssistantSystem = "assistant_system";
inline constexpr const char* kGoalSynthesis = "goal_synthesis";
inline constexpr const char* kGtevalJudge = "gteval_judge";
inline constexpr const char* kPiJudge = "pi_judge";
inline constexpr const char* kRnrJudge = "rnr_judge";

struct PromptTemplate {
    std::string name;
    std::string text;  // with {placeholder} slots
};

// Versioned set of prompt templates. The default pack ships embedded; a
// directory of <name>.txt files can override individual templates.
class PromptPack {
public:
    static PromptPack builtin();
    // Loads overrides from `dir` (files named <template>.txt); missing files
    // keep the builtin text. Throws StoreError when dir is unreadable.
    static PromptPack from_directory(const std::string& dir, std::string version);

    const PromptTemplate& get(const std::string& name) const;
    const std::string& version() const { return version_; }

private:
    std::string version_;
    std::map<std::string, PromptTemplate> templates_;
};

// Substitutes {name} placeholders. Throws TemplateError when a placeholder in
// the template has no value or a provided value is never used.
std::string render(const PromptTemplate& tmpl,
                   const std::map<std::string, std::string>& values);

// Plain-text transcript rendering: "USER: ..." / "ASSISTANT: ..." one turn
// per line. Newlines inside a turn are escaped so the rendering is injective.
std::string render_conversation(const core::Dialogue& dialogue);

// System message for the user proxy; contains the goal, never the reference.
std::string render_user_proxy_system(const core::GoalSpec& goal, const PromptTemplate& tmpl);

// System message for the assistant; embeds the labeled reference transcript.
std::string render_assistant_system(const core::Dialogue& reference, const PromptTemplate& tmpl);

}  // namespace mirrorbench::rollout
