#include "mirrorbench/rollout/prompts.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/strings.hpp"

namespace mirrorbench::rollout {

namespace {

constexpr const char* kPackVersion = "2025.10";

constexpr const char* kUserProxySystemText = R"__mb__(You are simulating a real human user for the MirrorBench evaluation harness. Respond with the next USER turn only. Do not write assistant messages, notes, or any other analysis. Your utterance should be like a real user and the context should be based on the following information provided.

Task description: {task_description}

Match the length, tone, and specificity of real user utterances. If you are unsure, respond naturally based on the assistant's previous messages like how a real human would. Note that your response MUST not contain anything other than the USER utterance. Do not include any prefixes like 'User:' or 'Human:' as well. Just the raw message content.)__mb__";

constexpr const char* kAssistantSystemText = R"__mb__(You are the assistant in a MirrorBench replay. The user-proxy agent is attempting to reproduce the USER side of the real conversation provided below. But the user-proxy does not have access to the real conversation history. Instead, it only has access to the conversation summary.

You need to respond as the assistant. But we are providing you with the real conversation history as context, so you can respond consistently same as (or similar to) the original assistant in the real conversation (you may paraphrase lightly for safety).

If user-proxy deviates from the original USER turn or the original response would violate policy, reply helpfully using your own knowledge while remaining consistent with the persona demonstrated so far. Always follow ethical content policies. Paraphrase sensitive content instead of quoting it verbatim, and refuse politely if a request is disallowed.

Here is the real conversation for context (the USER turns are from the original conversation):

{real_conversation}

Now, we will provide you with ongoing conversation with the user-proxy. Please respond as the assistant in this conversation.)__mb__";

constexpr const char* kGoalSynthesisText = R"__mb__(You will read a conversation between a real human USER and an ASSISTANT. Write a 3-6 sentence description of the user, addressed to the user in the second person ("You want...", "You prefer..."). Describe the user's intent, behavior, tone, and persona so that another model could play this user convincingly. Do not quote any user turn verbatim and do not mention the assistant's replies directly.

Conversation:

{conversation}

Respond with the description only, no headers or extra text.)__mb__";

constexpr const char* kGtevalJudgeText = R"__mb__(You are an expert evaluator of conversational AI systems. Your task is to compare two conversations and assess whether the user responses in the proxy conversation exhibit similar style, tone, and realism to the user responses in the real conversation.

## Real Conversation:

{real_conversation}

## Proxy Conversation (where user turns are generated by user proxy agent):

{proxy_conversation}

## Evaluation Criteria:

1. **Style Similarity**: Do the proxy user responses match the conversational style of real user responses (formality, tone, verbosity)?
2. **Realism**: Do the proxy user responses sound natural and human-like?
3. **Contextual Appropriateness**: Are the proxy user responses appropriate given the conversation context? Note: You should not evaluate based on the content of the responses, only their style, realism, contextual appropriateness, and tone.

## Instructions:

- Focus exclusively on comparing USER responses (ignore assistant responses)
- Consider the overall conversation flow, not just individual turns
- Evaluate style, tone, and naturalness without encouraging unsafe behaviour
- If the comparison cannot be performed safely, explain the reason and provide a score of 0.0
- Otherwise, provide detailed reasoning about the comparison and assign a score from 0.0 to 1.0 where:
  - 0.0 = Proxy user responses are completely unlike real user responses
  - 0.5 = Proxy user responses are somewhat similar but have noticeable differences
  - 1.0 = Proxy user responses are highly similar in style and realism

Provide your evaluation as a JSON object with the following structure:
{
    "reasoning": "Detailed explanation of your evaluation (2-3 sentences)",
    "score": <float between 0.0 and 1.0>
}

Output ONLY valid JSON, no additional text.)__mb__";

constexpr const char* kPiJudgeText = R"__mb__([System]

Please act as an impartial judge and choose the most realistic USER among the two conversations provided below. You should choose the conversation which has USER turns written by a real user in your opinion. Based on your experience & knowledge of human conversation, determine which USER in which conversation sounds more like a real human interacting with a chatbot. Note that your judgement should be based on style, tone and behavior of USER rather than the response quality of their utterances. Avoid any position biases and ensure that the order in which the responses were presented does not influence your decision. Do not allow the length of the USER messages to influence your evaluation. Do not let ASSISTANT messages influence your decision. Your evaluation must only be dependent on USER messages only. Be as objective as possible.

Before giving your final evaluation verdict, you should first think through and produce your reasoning step-by-step. Then, based on your reasoning, give your final verdict on which conversation has USER turns that sound more like a real human interacting with a chatbot.

If Conversation A is more real, then verdict would be "A". If Conversation B is more real, then verdict would be "B". If both are equally real or non-real, then verdict would be "Tie".

Your output must be of following JSON format: {"reasoning": "<short reason>", "verdict": "A"|"B"|"Tie"}.

[Conversation A]

{conversation_a}

[Conversation B]

{conversation_b}

Output ONLY valid JSON, no additional text.)__mb__";

constexpr const char* kRnrJudgeText = R"__mb__([System]

Please act as an impartial judge and provide verdict on the realism of the USER turns in the conversation provided below based on the provided rubric. You should avoid checking the responses of the ASSISTANT messages since they are not relevant to the task. Your evaluation should follow the rubric provided. Note that your judgement should be based on style, tone and behavior of USER rather than the response quality of their utterances.

[Rubric for scoring USER realism]

Provide verdict on how human-like the USER is on ("NO" or "YES") using this rubric (verdict "NO" means not real, verdict "YES" means real):

1. Concise and real-user like language
2. Does not sound scripted or artificial
3. Real-user like tone and style

Return JSON: {"reasoning": "<1-2 sentences>", "verdict": <"NO" or "YES">}.

[Conversation]

{conversation}

Output ONLY valid JSON, no additional text.)__mb__";

bool is_placeholder_char(char c) {
    return (c >= 'a' && c <= 'z') || c == '_';
}

// Extracts {name} slots; literal braces that do not wrap a [a-z_]+ name are
// left alone (judge prompts contain JSON skeletons).
std::set<std::string> find_placeholders(const std::string& text) {
    std::set<std::string> names;
    std::size_t pos = 0;
    while ((pos = text.find('{', pos)) != std::string::npos) {
        std::size_t end = pos + 1;
        while (end < text.size() && is_placeholder_char(text[end])) ++end;
        if (end > pos + 1 && end < text.size() && text[end] == '}') {
            names.insert(text.substr(pos + 1, end - pos - 1));
            pos = end + 1;
        } else {
            ++pos;
        }
    }
    return names;
}

}  // namespace

PromptPack PromptPack::builtin() {
    PromptPack pack;
    pack.version_ = kPackVersion;
    pack.templates_[kUserProxySystem] = {kUserProxySystem, kUserProxySystemText};
    pack.templates_[kAssistantSystem] = {kAssistantSystem, kAssistantSystemText};
    pack.templates_[kGoalSynthesis] = {kGoalSynthesis, kGoalSynthesisText};
    pack.templates_[kGtevalJudge] = {kGtevalJudge, kGtevalJudgeText};
    pack.templates_[kPiJudge] = {kPiJudge, kPiJudgeText};
    pack.templates_[kRnrJudge] = {kRnrJudge, kRnrJudgeText};
    return pack;
}

PromptPack PromptPack::from_directory(const std::string& dir, std::string version) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw StoreError("prompt pack directory not found: " + dir);
    PromptPack pack = builtin();
    pack.version_ = std::move(version);
    for (auto& [name, tmpl] : pack.templates_) {
        const fs::path file = fs::path(dir) / (name + ".txt");
        if (!fs::exists(file)) continue;
        std::ifstream in(file);
        std::stringstream buffer;
        buffer << in.rdbuf();
        tmpl.text = buffer.str();
    }
    return pack;
}

const PromptTemplate& PromptPack::get(const std::string& name) const {
    const auto it = templates_.find(name);
    if (it == templates_.end()) throw TemplateError("unknown prompt template: " + name);
    return it->second;
}

std::string render(const PromptTemplate& tmpl,
                   const std::map<std::string, std::string>& values) {
    const std::set<std::string> slots = find_placeholders(tmpl.text);
    for (const auto& [key, value] : values) {
        if (slots.count(key) == 0) {
            throw TemplateError("template '" + tmpl.name + "' has no placeholder {" + key + "}");
        }
    }
    std::string out = tmpl.text;
    for (const std::string& slot : slots) {
        const auto it = values.find(slot);
        if (it == values.end()) {
            throw TemplateError("template '" + tmpl.name + "' placeholder {" + slot +
                                "} left unfilled");
        }
        out = strings::replace_all(std::move(out), "{" + slot + "}", it->second);
    }
    return out;
}

std::string render_conversation(const core::Dialogue& dialogue) {
    std::string out;
    for (const core::Turn& turn : dialogue.turns()) {
        std::string text = strings::replace_all(turn.text, "\\", "\\\\");
        text = strings::replace_all(std::move(text), "\n", "\\n");
        out += (turn.role == core::Role::kUser ? "USER: " : "ASSISTANT: ");
        out += text;
        out.push_back('\n');
    }
    if (!out.empty()) out.pop_back();
    return out;
}

std::string render_user_proxy_system(const core::GoalSpec& goal, const PromptTemplate& tmpl) {
    if (strings::trim(goal.text).empty()) {
        throw ValidationError("user proxy system prompt requires a non-empty goal");
    }
    return render(tmpl, {{"task_description", goal.text}});
}

std::string render_assistant_system(const core::Dialogue& reference, const PromptTemplate& tmpl) {
    return render(tmpl, {{"real_conversation", render_conversation(reference)}});
}

}  // namespace mirrorbench::rollout
