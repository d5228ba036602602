#include "mirrorbench/model/client.hpp"

#include <cmath>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/hash.hpp"
#include "mirrorbench/model/cache.hpp"

namespace mirrorbench::model {

const char* chat_role_name(ChatRole role) {
    switch (role) {
        case ChatRole::kSystem: return "system";
        case ChatRole::kUser: return "user";
        case ChatRole::kAssistant: return "assistant";
    }
    return "user";
}

std::string cache_key(const ModelRequest& request,
                      const std::map<std::string, std::string>& extra_params) {
    hash::CanonicalEncoder enc;
    enc.field('m', request.model);
    for (const ChatMessage& message : request.messages) {
        enc.field('r', std::string_view(chat_role_name(message.role)));
        enc.field('c', message.content);
    }
    enc.field('t', request.temperature);
    enc.field('x', static_cast<std::uint64_t>(request.max_tokens));
    for (const auto& [key, value] : extra_params) {
        enc.field('k', key);
        enc.field('v', value);
    }
    enc.field('n', request.cache_namespace);
    return enc.digest_hex();
}

ModelClient::ModelClient(std::shared_ptr<Provider> provider, RetryPolicy retry,
                         std::shared_ptr<ResponseCache> cache, std::shared_ptr<Clock> clock)
    : provider_(std::move(provider)), retry_(retry), cache_(std::move(cache)),
      clock_(std::move(clock)) {}

ModelResponse ModelClient::complete(const ModelRequest& request,
                                    const std::map<std::string, std::string>& extra_params) {
    const std::string key = cache_key(request, extra_params);
    if (cache_ != nullptr) {
        auto hit = cache_->get(key, request.cache_namespace, clock_->now_unix_seconds());
        if (hit.has_value()) {
            hit->cached = true;
            hit->latency_s = 0.0;  // cache hits add no provider latency
            return *hit;
        }
    }

    std::string last_error;
    for (std::size_t attempt = 0; attempt <= retry_.max_retries; ++attempt) {
        if (attempt > 0) {
            const double delay =
                retry_.base_backoff_s * std::pow(retry_.growth, static_cast<double>(attempt - 1));
            clock_->sleep_for_seconds(delay);
        }
        try {
            const double start = clock_->monotonic_seconds();
            ModelResponse response = provider_->send(request);
            response.latency_s = clock_->monotonic_seconds() - start;
            response.cached = false;
            if (cache_ != nullptr) {
                cache_->put(key, request.cache_namespace, response, clock_->now_unix_seconds());
            }
            return response;
        } catch (const ProviderError& error) {
            if (!error.transient) {
                throw TransportError("provider rejected request: " + error.message, false);
            }
            last_error = error.message;
        }
    }
    throw TransportError("retries exhausted after " + std::to_string(retry_.max_retries + 1) +
                             " attempts; last error: " + last_error,
                         true);
}

}  // namespace mirrorbench::model
