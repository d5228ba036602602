#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mirrorbench/data/normalize.hpp"

namespace mirrorbench::data {

enum class StratRule { kTurnBuckets, kTopicAndFacet, kTopicAndClarificationCount };

const char* strat_rule_name(StratRule rule);
StratRule strat_rule_from_name(const std::string& name);

// Dataset-specific stratification key. Turn buckets use two inclusive upper
// bounds: short when L <= short_max, medium when L <= medium_max, long above.
struct StratificationRule {
    std::string dataset_id;
    StratRule kind = StratRule::kTurnBuckets;
    std::size_t short_max = 2;
    std::size_t medium_max = 5;
};

// Throws ValidationError when the rule does not cover an item (missing
// topic/facet extras).
std::string stratum_key(const StratificationRule& rule, const EpisodeCandidate& candidate);

// Partition: union of parts equals the input, parts are disjoint.
std::map<std::string, std::vector<std::size_t>> stratify(
    const std::vector<EpisodeCandidate>& candidates, const StratificationRule& rule);

struct SamplingPlan {
    std::size_t cap = 200;
    std::size_t min_per_stratum = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::size_t> allocations;
};

struct SampleResult {
    SamplingPlan plan;
    std::vector<std::size_t> selected;  // indices into the candidate vector, sorted
};

// Proportional allocation with a per-stratum minimum: each stratum gets
// max(min_per_stratum, round(cap * size/total)) clamped to its size, then the
// largest allocations are trimmed one by one (ties to the lexicographically
// smallest key) until the total fits the cap. Selection within a stratum is a
// seeded uniform draw without replacement; identical inputs and seed replay
// identical selections.
SampleResult sample(const std::map<std::string, std::vector<std::size_t>>& strata,
                    std::size_t cap, std::size_t min_per_stratum, std::uint64_t seed);

}  // namespace mirrorbench::data
