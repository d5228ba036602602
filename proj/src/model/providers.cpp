#include "mirrorbench/model/providers.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <random>

#include "mirrorbench/common/rng.hpp"
#include "mirrorbench/common/strings.hpp"

namespace mirrorbench::model {

using nlohmann::json;

std::uint64_t estimate_tokens(const std::string& text) {
    return strings::split_whitespace(text).size();
}

HttpChatProvider::HttpChatProvider(HttpProviderConfig config) : config_(std::move(config)) {}

ModelResponse HttpChatProvider::send(const ModelRequest& request) {
    json body{{"model", request.model},
              {"temperature", request.temperature},
              {"max_tokens", request.max_tokens}};
    json messages = json::array();
    for (const ChatMessage& message : request.messages) {
        messages.push_back({{"role", chat_role_name(message.role)}, {"content", message.content}});
    }
    body["messages"] = messages;

    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        const char* key = std::getenv(config_.api_key_env.c_str());
        if (key == nullptr) {
            throw ProviderError{"credential env var not set: " + config_.api_key_env, false};
        }
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    auto result = client.Post(config_.path, headers, body.dump(), "application/json");
    if (!result) {
        throw ProviderError{"connection failed: " + httplib::to_string(result.error()), true};
    }
    if (result->status >= 500) {
        throw ProviderError{"server error " + std::to_string(result->status), true};
    }
    if (result->status >= 400) {
        throw ProviderError{"invalid request " + std::to_string(result->status) + ": " +
                                result->body,
                            false};
    }

    json doc;
    try {
        doc = json::parse(result->body);
    } catch (const json::exception& e) {
        throw ProviderError{std::string("unparseable response body: ") + e.what(), true};
    }

    ModelResponse response;
    if (doc.contains("text")) {
        response.text = doc.at("text").get<std::string>();
    } else if (doc.contains("choices") && !doc.at("choices").empty()) {
        response.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } else {
        throw ProviderError{"response missing text/choices", true};
    }
    if (doc.contains("usage")) {
        const auto& usage = doc.at("usage");
        response.usage.input_tokens = usage.value("prompt_tokens", std::uint64_t{0});
        response.usage.output_tokens = usage.value("completion_tokens", std::uint64_t{0});
    } else {
        std::string prompt_text;
        for (const ChatMessage& message : request.messages) prompt_text += message.content;
        response.usage.input_tokens = estimate_tokens(prompt_text);
        response.usage.output_tokens = estimate_tokens(response.text);
        response.usage.estimated = true;
    }
    return response;
}

namespace {

const char* kMockWords[] = {
    "okay",    "thanks",  "what",  "about",  "the",    "price",   "can",     "you",
    "show",    "me",      "more",  "detail", "please", "sounds",  "good",    "how",
    "does",    "this",    "work",  "need",   "it",     "for",     "travel",  "budget",
    "options", "compare", "best",  "one",    "why",    "is",      "that",    "better",
    "fine",    "let's",   "go",    "with",   "second", "thing",   "also",    "battery",
    "life",    "matters", "a",     "lot",    "should", "i",       "wait",    "sale",
    "or",      "buy",     "now",   "hmm",    "not",    "sure",    "maybe",   "cheaper",
    "model",   "instead", "could", "list",   "top",    "three",   "choices", "screen",
    "size",    "weight",  "and",   "warranty"};

std::string pseudo_utterance(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const std::size_t word_count = 6 + rng::uniform_below(gen, 15);
    std::string out;
    constexpr std::size_t kVocab = sizeof(kMockWords) / sizeof(kMockWords[0]);
    for (std::size_t i = 0; i < word_count; ++i) {
        if (!out.empty()) out.push_back(' ');
        out += kMockWords[rng::uniform_below(gen, kVocab)];
    }
    out.push_back('.');
    return out;
}

}  // namespace

ModelResponse DeterministicMockProvider::send(const ModelRequest& request) {
    std::string all_content = request.model;
    for (const ChatMessage& message : request.messages) {
        all_content += '\x1f';
        all_content += message.content;
    }
    const std::uint64_t seed = rng::mix(salt_, all_content);

    ModelResponse response;
    // Judge and goal prompts are recognized by their fixed instruction text
    // so offline runs produce parseable verdicts.
    if (all_content.find("\"verdict\": \"A\"|\"B\"|\"Tie\"") != std::string::npos) {
        static const char* kChoices[] = {"A", "B", "Tie"};
        response.text = std::string("{\"reasoning\": \"mock pairwise judgement\", \"verdict\": \"") +
                        kChoices[seed % 3] + "\"}";
    } else if (all_content.find("<\"NO\" or \"YES\">") != std::string::npos) {
        response.text = std::string("{\"reasoning\": \"mock rubric judgement\", \"verdict\": \"") +
                        (seed % 2 == 0 ? "YES" : "NO") + "\"}";
    } else if (all_content.find("\"score\": <float between 0.0 and 1.0>") != std::string::npos) {
        const double score = static_cast<double>(seed % 101) / 100.0;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "{\"reasoning\": \"mock comparison\", \"score\": %.2f}",
                      score);
        response.text = buf;
    } else if (all_content.find("Write a 3-6 sentence description") != std::string::npos) {
        response.text = "You are exploring a purchase and want clear, comparable options. "
                        "You ask short follow-up questions and keep a casual tone. "
                        "You care about practical details over marketing language.";
    } else {
        response.text = pseudo_utterance(seed);
    }
    std::string prompt_text;
    for (const ChatMessage& message : request.messages) prompt_text += message.content;
    response.usage.input_tokens = estimate_tokens(prompt_text);
    response.usage.output_tokens = estimate_tokens(response.text);
    return response;
}

}  // namespace mirrorbench::model
