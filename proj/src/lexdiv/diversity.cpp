#include "mirrorbench/lexdiv/diversity.hpp"

#include <cmath>
#include <limits>

namespace mirrorbench::lexdiv {

const char* metric_id_name(MetricId id) {
    switch (id) {
        case MetricId::kMattr: return "mattr";
        case MetricId::kYulesK: return "yules_k";
        case MetricId::kHdd: return "hdd";
    }
    return "mattr";
}

std::optional<MetricId> metric_id_from_name(const std::string& name) {
    if (name == "mattr") return MetricId::kMattr;
    if (name == "yules_k") return MetricId::kYulesK;
    if (name == "hdd") return MetricId::kHdd;
    return std::nullopt;
}

FrequencySpectrum build_spectrum(const TokenSequence& tokens) {
    FrequencySpectrum out;
    out.token_count = tokens.size();
    for (const std::string& token : tokens.tokens) ++out.freq[token];
    out.type_count = out.freq.size();
    for (const auto& [token, count] : out.freq) ++out.spectrum[count];
    return out;
}

std::optional<double> mattr(const TokenSequence& tokens, std::size_t window) {
    const std::size_t n = tokens.size();
    if (window == 0 || n < window) return std::nullopt;

    // One pass with an incremental window type count.
    std::unordered_map<std::string, std::uint64_t> counts;
    std::size_t distinct = 0;
    std::uint64_t distinct_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (++counts[tokens.tokens[i]] == 1) ++distinct;
        if (i + 1 >= window) {
            distinct_sum += distinct;
            const std::string& leaving = tokens.tokens[i + 1 - window];
            auto it = counts.find(leaving);
            if (--(it->second) == 0) {
                counts.erase(it);
                --distinct;
            }
        }
    }
    const double windows = static_cast<double>(n - window + 1);
    return static_cast<double>(distinct_sum) / (static_cast<double>(window) * windows);
}

std::optional<double> yules_k(const TokenSequence& tokens) {
    const FrequencySpectrum spec = build_spectrum(tokens);
    if (spec.token_count == 0) return std::nullopt;
    double weighted = 0.0;
    for (const auto& [occurrences, types] : spec.spectrum) {
        weighted += static_cast<double>(occurrences) * static_cast<double>(occurrences) *
                    static_cast<double>(types);
    }
    const double n = static_cast<double>(spec.token_count);
    return 1e4 * (weighted - n) / (n * n);
}

namespace {

// log C(n, k); -inf when k > n.
double log_choose(std::uint64_t n, std::uint64_t k) {
    if (k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

std::optional<double> hdd(const TokenSequence& tokens, std::size_t sample_size) {
    const FrequencySpectrum spec = build_spectrum(tokens);
    const std::uint64_t n = spec.token_count;
    const std::uint64_t s = sample_size;
    if (s == 0 || n == 0 || s > n) return std::nullopt;

    const double log_total = log_choose(n, s);
    double sum = 0.0;
    for (const auto& [token, f] : spec.freq) {
        double p_absent = 0.0;
        if (n - f >= s) {
            p_absent = std::exp(log_choose(n - f, s) - log_total);
        }
        sum += 1.0 - p_absent;
    }
    return sum / static_cast<double>(s);
}

LexOutcome evaluate_metric(MetricId id, const TokenSequence& tokens, const LexConfig& config) {
    LexOutcome outcome;
    switch (id) {
        case MetricId::kMattr:
            outcome.value = mattr(tokens, config.window);
            if (!outcome.value) outcome.reason = "token count below window";
            break;
        case MetricId::kYulesK:
            outcome.value = yules_k(tokens);
            if (!outcome.value) outcome.reason = "empty token sequence";
            break;
        case MetricId::kHdd:
            outcome.value = hdd(tokens, config.sample_size);
            if (!outcome.value) outcome.reason = "token count below sample size";
            break;
    }
    if (!outcome.value.has_value()) {
        outcome.unstable = true;
    } else if (tokens.size() < config.min_tokens) {
        outcome.unstable = true;
        outcome.reason = "token count below stability minimum";
    }
    return outcome;
}

}  // namespace mirrorbench::lexdiv
