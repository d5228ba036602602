#include "mirrorbench/data/stratify.hpp"

#include <algorithm>
#include <cmath>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/rng.hpp"

namespace mirrorbench::data {

const char* strat_rule_name(StratRule rule) {
    switch (rule) {
        case StratRule::kTurnBuckets: return "turn_buckets";
        case StratRule::kTopicAndFacet: return "topic_and_facet";
        case StratRule::kTopicAndClarificationCount: return "topic_and_clarification_count";
    }
    return "turn_buckets";
}

StratRule strat_rule_from_name(const std::string& name) {
    if (name == "turn_buckets") return StratRule::kTurnBuckets;
    if (name == "topic_and_facet") return StratRule::kTopicAndFacet;
    if (name == "topic_and_clarification_count") return StratRule::kTopicAndClarificationCount;
    throw ConfigError("unknown stratification rule: " + name);
}

namespace {

std::string require_extra(const EpisodeCandidate& candidate, const std::string& key) {
    const auto it = candidate.extras.find(key);
    if (it == candidate.extras.end() || it->second.empty()) {
        throw ValidationError("stratification rule not covered: conversation " +
                              candidate.source_id + " lacks extras." + key);
    }
    return it->second;
}

}  // namespace

std::string stratum_key(const StratificationRule& rule, const EpisodeCandidate& candidate) {
    switch (rule.kind) {
        case StratRule::kTurnBuckets: {
            const std::size_t pairs = candidate.dialogue.length();
            if (pairs <= rule.short_max) return "short";
            if (pairs <= rule.medium_max) return "medium";
            return "long";
        }
        case StratRule::kTopicAndFacet:
            return require_extra(candidate, "topic") + "|" + require_extra(candidate, "facet");
        case StratRule::kTopicAndClarificationCount:
            return require_extra(candidate, "topic") + "|" +
                   require_extra(candidate, "clarification_pairs");
    }
    throw ValidationError("unhandled stratification rule");
}

std::map<std::string, std::vector<std::size_t>> stratify(
    const std::vector<EpisodeCandidate>& candidates, const StratificationRule& rule) {
    std::map<std::string, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        strata[stratum_key(rule, candidates[i])].push_back(i);
    }
    return strata;
}

SampleResult sample(const std::map<std::string, std::vector<std::size_t>>& strata,
                    std::size_t cap, std::size_t min_per_stratum, std::uint64_t seed) {
    std::size_t total = 0;
    for (const auto& [key, members] : strata) total += members.size();
    if (total == 0) throw ValidationError("cannot sample from an empty dataset");

    SampleResult result;
    result.plan.cap = cap;
    result.plan.min_per_stratum = min_per_stratum;
    result.plan.seed = seed;

    // Proportional share with the per-stratum minimum, clamped to size.
    std::size_t allocated = 0;
    for (const auto& [key, members] : strata) {
        if (members.empty()) continue;
        const double share = static_cast<double>(cap) * static_cast<double>(members.size()) /
                             static_cast<double>(total);
        std::size_t want = static_cast<std::size_t>(std::llround(share));
        want = std::max(want, min_per_stratum);
        want = std::min(want, members.size());
        result.plan.allocations[key] = want;
        allocated += want;
    }

    // Trim the largest allocations until the cap holds; ties break toward the
    // lexicographically smallest key (map order already gives that).
    while (allocated > cap) {
        auto largest = result.plan.allocations.end();
        for (auto it = result.plan.allocations.begin(); it != result.plan.allocations.end();
             ++it) {
            if (largest == result.plan.allocations.end() || it->second > largest->second) {
                largest = it;
            }
        }
        if (largest == result.plan.allocations.end() || largest->second == 0) break;
        --largest->second;
        --allocated;
    }

    // Seeded draw per stratum, iterated in key order for reproducibility.
    for (const auto& [key, want] : result.plan.allocations) {
        const auto& members = strata.at(key);
        std::mt19937_64 gen(rng::mix(seed, key));
        const std::vector<std::size_t> picked =
            rng::sample_without_replacement(gen, members.size(), want);
        for (const std::size_t local : picked) result.selected.push_back(members[local]);
    }
    std::sort(result.selected.begin(), result.selected.end());
    return result;
}

}  // namespace mirrorbench::data
