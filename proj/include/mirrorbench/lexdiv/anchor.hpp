#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mirrorbench/lexdiv/diversity.hpp"
#include "mirrorbench/lexdiv/tokenizer.hpp"

namespace mirrorbench::lexdiv {

// Per-dataset human statistics for one lexical metric: the mean and sample
// standard deviation (n-1 denominator) of the metric over human user-side
// token sequences, computed once and reused across runs.
struct HumanAnchor {
    MetricId metric_id = MetricId::kMattr;
    double mu = 0.0;
    double sigma = 0.0;
    std::size_t n = 0;
    TokenizerSpec tokenizer;
    std::string dataset_id;
};

struct AnchorResult {
    HumanAnchor anchor;
    std::size_t excluded = 0;  // sequences dropped by the stability filter
};

// Computes the anchor over the human sequences, excluding sequences the
// stability filter rejects. Throws ValidationError when fewer than two
// usable sequences remain.
AnchorResult compute_anchor(const std::vector<TokenSequence>& human_sequences, MetricId metric,
                            const LexConfig& config, const TokenizerSpec& tokenizer,
                            const std::string& dataset_id);

struct ZScore {
    double value = 0.0;
    bool degenerate = false;  // sigma == 0 and value != mu
};

// (value - mu) / sigma. A zero-sigma anchor yields 0 at the mean and a
// signed-infinity sentinel flagged degenerate otherwise.
ZScore zscore(double value, const HumanAnchor& anchor);

// JSON persistence: {metric_id, mu, sigma, n, tokenizer:{kind,version}, dataset_id}.
void save_anchor(const HumanAnchor& anchor, const std::string& path);
HumanAnchor load_anchor(const std::string& path);

}  // namespace mirrorbench::lexdiv
