#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace mirrorbench::report {

// Judge-human agreement statistics. A coefficient is absent when undefined
// (zero variance in either vector).
struct CorrelationResult {
    std::optional<double> pearson_r;
    std::optional<double> spearman_rho;
    std::optional<double> kendall_tau;  // tau-b with tie correction
    std::size_t n = 0;
    std::optional<double> p_pearson;
    std::optional<double> p_spearman;
    std::optional<double> p_kendall;
};

struct CorrelateOptions {
    std::size_t permutations = 10000;  // seeded permutation test
    std::uint64_t seed = 0;
    bool compute_p_values = true;
};

// Pearson on raw values, Spearman as Pearson on average ranks, Kendall tau-b
// via sort and inversion counting. P-values are two-sided permutation tests.
// Throws ValidationError when fewer than 3 pairs are given.
CorrelationResult correlate(const std::vector<std::pair<double, double>>& pairs,
                            const CorrelateOptions& options = {});

}  // namespace mirrorbench::report
