#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include "mirrorbench/lexdiv/tokenizer.hpp"

namespace mirrorbench::lexdiv {

enum class MetricId { kMattr, kYulesK, kHdd };

const char* metric_id_name(MetricId id);
std::optional<MetricId> metric_id_from_name(const std::string& name);

// Token-frequency accounting: f maps each type to its count, spectrum maps
// an occurrence count i to the number of types occurring exactly i times.
struct FrequencySpectrum {
    std::unordered_map<std::string, std::uint64_t> freq;
    std::map<std::uint64_t, std::uint64_t> spectrum;
    std::uint64_t type_count = 0;   // V
    std::uint64_t token_count = 0;  // N
};

FrequencySpectrum build_spectrum(const TokenSequence& tokens);

struct LexConfig {
    std::size_t window = 50;       // MATTR sliding window width
    std::size_t sample_size = 42;  // HD-D sample size
    std::size_t min_tokens = 5;    // stability filter
};

// Moving-average type-token ratio over a sliding window of width `window`.
// Undefined (nullopt) when N < window or N == 0.
std::optional<double> mattr(const TokenSequence& tokens, std::size_t window);

// Repetitiveness from the frequency spectrum, scaled by 1e4; zero iff all
// types occur once. Undefined for empty input.
std::optional<double> yules_k(const TokenSequence& tokens);

// Expected proportion of distinct types in a sample of `sample_size` tokens
// drawn without replacement. Undefined when sample_size > N or N == 0.
// Binomial ratios are evaluated in log space so large N does not overflow.
std::optional<double> hdd(const TokenSequence& tokens, std::size_t sample_size);

// A metric evaluation with the stability filter applied: `value` is absent
// when the metric is undefined for this input, `unstable` marks sequences
// excluded from aggregation (undefined, or shorter than min_tokens).
struct LexOutcome {
    std::optional<double> value;
    bool unstable = false;
    std::string reason;
};

LexOutcome evaluate_metric(MetricId id, const TokenSequence& tokens, const LexConfig& config);

}  // namespace mirrorbench::lexdiv
