#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "mirrorbench/model/client.hpp"

namespace mirrorbench::model {

// Chat-completion style HTTP+JSON endpoint. Request body
// {model, messages[{role,content}], temperature, max_tokens}; the response is
// read from `text` or `choices[0].message.content` plus optional
// usage{prompt_tokens, completion_tokens}. Credentials come from the
// environment variable named in the config, sent as a bearer token.
struct HttpProviderConfig {
    std::string base_url;  // e.g. https://api.example.com
    std::string path = "/v1/chat/completions";
    std::string api_key_env;  // name of the env var holding the key; may be empty
    int timeout_seconds = 120;
};

class HttpChatProvider final : public Provider {
public:
    explicit HttpChatProvider(HttpProviderConfig config);
    ModelResponse send(const ModelRequest& request) override;
    std::string name() const override { return "http:" + config_.base_url; }

private:
    HttpProviderConfig config_;
};

// Fully deterministic offline provider. Generates pseudo-utterances seeded by
// the request content; when the prompt is one of the judge or goal templates
// it answers with a well-formed verdict so complete pipelines run without
// network access.
class DeterministicMockProvider final : public Provider {
public:
    explicit DeterministicMockProvider(std::uint64_t salt = 0) : salt_(salt) {}
    ModelResponse send(const ModelRequest& request) override;
    std::string name() const override { return "mock"; }

private:
    std::uint64_t salt_;
};

// Rough token estimate used when a provider reports no usage.
std::uint64_t estimate_tokens(const std::string& text);

}  // namespace mirrorbench::model
