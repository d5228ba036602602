#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mirrorbench/common/clock.hpp"

namespace mirrorbench::model {

enum class ChatRole { kSystem, kUser, kAssistant };

const char* chat_role_name(ChatRole role);

struct ChatMessage {
    ChatRole role = ChatRole::kUser;
    std::string content;
};

struct Usage {
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;
    bool estimated = false;  // provider did not report counts
};

struct ModelRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    std::uint64_t max_tokens = 2048;
    std::optional<std::int64_t> seed_hint;
    std::string cache_namespace;  // namespace isolation per metric
};

struct ModelResponse {
    std::string text;
    Usage usage;
    double latency_s = 0.0;
    bool cached = false;
};

// Exponential backoff policy: delay before retry k (1-based) is
// base_backoff_s * growth^(k-1).
struct RetryPolicy {
    std::size_t max_retries = 5;
    double base_backoff_s = 2.0;
    double growth = 2.0;
};

// Provider failure. Transient failures (HTTP 5xx, timeouts, connection
// resets) are retried; invalid requests (4xx) are not.
struct ProviderError {
    std::string message;
    bool transient = false;
};

// Minimal chat-completion endpoint contract.
class Provider {
public:
    virtual ~Provider() = default;
    // Throws ProviderError on failure.
    virtual ModelResponse send(const ModelRequest& request) = 0;
    virtual std::string name() const = 0;
};

// Content-addressed key over (model, messages, temperature, max_tokens,
// extra_params, namespace); any field change changes the digest. extra_params
// iterate in map order, so the encoding is canonical.
std::string cache_key(const ModelRequest& request,
                      const std::map<std::string, std::string>& extra_params);

class ResponseCache;  // model/cache.hpp

// Uniform invocation: cache lookup, provider call with retry, telemetry
// capture. Safe for concurrent use; an in-flight request for a key does not
// block an identical concurrent request.
class ModelClient {
public:
    ModelClient(std::shared_ptr<Provider> provider, RetryPolicy retry,
                std::shared_ptr<ResponseCache> cache, std::shared_ptr<Clock> clock);

    // Throws TransportError after the retry budget is exhausted or on a
    // non-retryable provider rejection.
    ModelResponse complete(const ModelRequest& request,
                           const std::map<std::string, std::string>& extra_params = {});

    const RetryPolicy& retry_policy() const { return retry_; }
    Provider& provider() { return *provider_; }

private:
    std::shared_ptr<Provider> provider_;
    RetryPolicy retry_;
    std::shared_ptr<ResponseCache> cache_;
    std::shared_ptr<Clock> clock_;
};

}  // namespace mirrorbench::model
