#pragma once

#include <stdexcept>
#include <string>

namespace mirrorbench {

// Invalid or unknown configuration (bad YAML keys, unknown component names,
// unregistered tokenizer vocabularies).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Domain invariant violations (non-alternating dialogue, empty goal text).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Model endpoint failure after the retry budget is exhausted, or a
// non-retryable provider rejection.
class TransportError : public std::runtime_error {
public:
    TransportError(const std::string& what, bool retryable_exhausted = false)
        : std::runtime_error(what), retries_exhausted(retryable_exhausted) {}
    bool retries_exhausted = false;
};

// Run-store / cache persistence failure.
class StoreError : public std::runtime_error {
public:
    explicit StoreError(const std::string& what) : std::runtime_error(what) {}
};

// Prompt template rendering failure (unfilled or unknown placeholder).
class TemplateError : public std::runtime_error {
public:
    explicit TemplateError(const std::string& what) : std::runtime_error(what) {}
};

// Judge output that cannot be turned into a verdict of the expected kind.
class VerdictParseError : public std::runtime_error {
public:
    explicit VerdictParseError(const std::string& what) : std::runtime_error(what) {}
};

// Model missing from the pricing table.
class MissingPricingError : public std::runtime_error {
public:
    explicit MissingPricingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mirrorbench
