#pragma once

// Independent brute-force oracles for the lexical metrics and correlation
// statistics. These deliberately take the slow, direct route so they share no
// code path with the implementations they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mirrorbench/common/rng.hpp"

namespace mirrorbench::testing {

// MATTR by explicit window enumeration with std::set.
inline double mattr_oracle(const std::vector<std::string>& tokens, std::size_t window) {
    const std::size_t n = tokens.size();
    double sum = 0.0;
    for (std::size_t i = 0; i + window <= n; ++i) {
        std::set<std::string> types(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                    tokens.begin() + static_cast<std::ptrdiff_t>(i + window));
        sum += static_cast<double>(types.size());
    }
    const double windows = static_cast<double>(n - window + 1);
    return sum / (static_cast<double>(window) * windows);
}

// Yule's K straight from per-type frequencies (no spectrum construction).
inline double yules_k_oracle(const std::vector<std::string>& tokens) {
    std::map<std::string, std::uint64_t> freq;
    for (const std::string& t : tokens) ++freq[t];
    double sum_f2 = 0.0;
    for (const auto& [t, f] : freq) sum_f2 += static_cast<double>(f) * static_cast<double>(f);
    const double n = static_cast<double>(tokens.size());
    return 1e4 * (sum_f2 - n) / (n * n);
}

struct HddOracleResult {
    double value = 0.0;
    bool exact = false;
    double standard_error = 0.0;  // 0 for exact enumeration
};

// Exact for n <= 62 (intermediate products stay within u64); prefix products
// of a binomial row are themselves binomial coefficients, so each division is
// exact.
inline std::uint64_t choose_u64(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
    }
    return result;
}

// Expected fraction of distinct types in a without-replacement sample:
// exhaustive subset enumeration when C(N, s) is small, otherwise Monte-Carlo
// with `mc_draws` seeded draws.
inline HddOracleResult hdd_sampling_oracle(const std::vector<std::string>& tokens,
                                           std::size_t sample_size, std::uint64_t seed,
                                           std::size_t mc_draws = 1000000,
                                           std::uint64_t exhaustive_limit = 200000) {
    const std::size_t n = tokens.size();
    // Map token strings to small ids for popcount-based distinct counting.
    std::vector<std::string> vocab;
    std::vector<std::uint32_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = std::find(vocab.begin(), vocab.end(), tokens[i]);
        if (it == vocab.end()) {
            ids[i] = static_cast<std::uint32_t>(vocab.size());
            vocab.push_back(tokens[i]);
        } else {
            ids[i] = static_cast<std::uint32_t>(it - vocab.begin());
        }
    }

    const auto next_combination = [](std::vector<std::size_t>& combo, std::size_t limit) {
        const std::size_t s = combo.size();
        std::size_t i = s;
        while (i > 0) {
            --i;
            if (combo[i] < limit - s + i) {
                ++combo[i];
                for (std::size_t j = i + 1; j < s; ++j) combo[j] = combo[j - 1] + 1;
                return true;
            }
        }
        return false;
    };

    HddOracleResult result;
    const std::uint64_t subsets = choose_u64(n, sample_size);
    if (subsets != 0 && subsets <= exhaustive_limit && vocab.size() <= 64) {
        std::vector<std::size_t> combo(sample_size);
        std::iota(combo.begin(), combo.end(), std::size_t{0});
        double total_distinct = 0.0;
        std::uint64_t count = 0;
        do {
            std::uint64_t mask = 0;
            for (const std::size_t idx : combo) mask |= 1ULL << ids[idx];
            total_distinct += static_cast<double>(__builtin_popcountll(mask));
            ++count;
        } while (next_combination(combo, n));
        result.value = total_distinct / (static_cast<double>(count) *
                                         static_cast<double>(sample_size));
        result.exact = true;
        return result;
    }

    // Monte Carlo draws without replacement via partial Fisher-Yates.
    std::mt19937_64 gen(rng::mix(seed, "hdd-oracle"));
    std::vector<std::uint32_t> pool(ids);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t draw = 0; draw < mc_draws; ++draw) {
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < sample_size; ++i) {
            const std::size_t j =
                i + static_cast<std::size_t>(rng::uniform_below(gen, n - i));
            std::swap(pool[i], pool[j]);
            mask |= 1ULL << pool[i];
        }
        const double fraction = static_cast<double>(__builtin_popcountll(mask)) /
                                static_cast<double>(sample_size);
        sum += fraction;
        sum_sq += fraction * fraction;
    }
    const double mean = sum / static_cast<double>(mc_draws);
    const double var = std::max(0.0, sum_sq / static_cast<double>(mc_draws) - mean * mean);
    result.value = mean;
    result.exact = false;
    result.standard_error = std::sqrt(var / static_cast<double>(mc_draws));
    return result;
}

// Kendall tau-b by O(n^2) pair counting with explicit tie correction.
inline double kendall_pair_count_oracle(const std::vector<double>& x,
                                        const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::int64_t concordant = 0;
    std::int64_t discordant = 0;
    std::int64_t ties_x = 0;
    std::int64_t ties_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) continue;
            if (dx == 0.0) {
                ++ties_x;
            } else if (dy == 0.0) {
                ++ties_y;
            } else if (dx * dy > 0.0) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double denom =
        std::sqrt(static_cast<double>(concordant + discordant + ties_x)) *
        std::sqrt(static_cast<double>(concordant + discordant + ties_y));
    return static_cast<double>(concordant - discordant) / denom;
}

// Spearman rho for tie-free data via the classical rank-difference formula.
inline double spearman_no_ties_oracle(const std::vector<double>& x,
                                      const std::vector<double>& y) {
    const std::size_t n = x.size();
    const auto ranks = [&](const std::vector<double>& values) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            double rank = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (values[j] < values[i]) rank += 1.0;
            }
            r[i] = rank;
        }
        return r;
    };
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    const double nn = static_cast<double>(n);
    return 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0));
}

// Random token sequence over a bounded vocabulary.
inline std::vector<std::string> random_tokens(std::mt19937_64& gen, std::size_t length,
                                              std::size_t vocab_size) {
    static const char* kNames[] = {"t0", "t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8", "t9"};
    std::vector<std::string> tokens;
    tokens.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        tokens.push_back(kNames[rng::uniform_below(gen, std::min<std::size_t>(vocab_size, 10))]);
    }
    return tokens;
}

}  // namespace mirrorbench::testing
