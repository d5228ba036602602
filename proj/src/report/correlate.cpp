#include "mirrorbench/report/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/rng.hpp"

namespace mirrorbench::report {

namespace {

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

// Average ranks (ties share the mean of their rank span).
std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

// Merge sort inversion count over y.
std::uint64_t count_swaps(std::vector<double>& y) {
    const std::size_t n = y.size();
    if (n < 2) return 0;
    std::vector<double> buffer(n);
    std::uint64_t swaps = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo < n; lo += 2 * width) {
            const std::size_t mid = std::min(lo + width, n);
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t a = lo;
            std::size_t b = mid;
            std::size_t out = lo;
            while (a < mid && b < hi) {
                if (y[b] < y[a]) {
                    swaps += mid - a;
                    buffer[out++] = y[b++];
                } else {
                    buffer[out++] = y[a++];
                }
            }
            while (a < mid) buffer[out++] = y[a++];
            while (b < hi) buffer[out++] = y[b++];
            std::copy(buffer.begin() + static_cast<std::ptrdiff_t>(lo),
                      buffer.begin() + static_cast<std::ptrdiff_t>(hi),
                      y.begin() + static_cast<std::ptrdiff_t>(lo));
        }
    }
    return swaps;
}

// Kendall tau-b with tie correction (Knight's algorithm).
std::optional<double> kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    const auto pairs_of = [](std::uint64_t t) { return t * (t - 1) / 2; };
    std::uint64_t n1 = 0;  // ties in x
    std::uint64_t n3 = 0;  // joint ties
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
            n1 += pairs_of(j - i + 1);
            std::size_t k = i;
            while (k <= j) {
                std::size_t m = k;
                while (m + 1 <= j && y[order[m + 1]] == y[order[k]]) ++m;
                n3 += pairs_of(m - k + 1);
                k = m + 1;
            }
            i = j + 1;
        }
    }
    std::uint64_t n2 = 0;  // ties in y
    {
        std::vector<double> sorted_y(y);
        std::sort(sorted_y.begin(), sorted_y.end());
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && sorted_y[j + 1] == sorted_y[i]) ++j;
            n2 += pairs_of(j - i + 1);
            i = j + 1;
        }
    }

    std::vector<double> y_by_x(n);
    for (std::size_t i = 0; i < n; ++i) y_by_x[i] = y[order[i]];
    const std::uint64_t swaps = count_swaps(y_by_x);

    const std::uint64_t n0 = pairs_of(n);
    const double denom = std::sqrt(static_cast<double>(n0 - n1)) *
                         std::sqrt(static_cast<double>(n0 - n2));
    if (denom == 0.0) return std::nullopt;
    const double s = static_cast<double>(n0) - static_cast<double>(n1) -
                     static_cast<double>(n2) + static_cast<double>(n3) -
                     2.0 * static_cast<double>(swaps);
    return s / denom;
}

// Two-sided permutation p-value for a correlation statistic.
template <typename Fn>
std::optional<double> permutation_p(const std::vector<double>& x, std::vector<double> y,
                                    double observed, std::size_t permutations,
                                    std::uint64_t seed, Fn&& statistic) {
    std::mt19937_64 gen(rng::mix(seed, "correlate-permutation"));
    std::size_t at_least = 0;
    std::size_t valid = 0;
    for (std::size_t p = 0; p < permutations; ++p) {
        for (std::size_t i = y.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng::uniform_below(gen, i));
            std::swap(y[i - 1], y[j]);
        }
        const std::optional<double> stat = statistic(x, y);
        if (!stat.has_value()) continue;
        ++valid;
        if (std::fabs(*stat) >= std::fabs(observed) - 1e-15) ++at_least;
    }
    if (valid == 0) return std::nullopt;
    return (1.0 + static_cast<double>(at_least)) / (1.0 + static_cast<double>(valid));
}

}  // namespace

CorrelationResult correlate(const std::vector<std::pair<double, double>>& pairs,
                            const CorrelateOptions& options) {
    if (pairs.size() < 3) {
        throw ValidationError("correlation needs at least 3 pairs, got " +
                              std::to_string(pairs.size()));
    }
    std::vector<double> x;
    std::vector<double> y;
    x.reserve(pairs.size());
    y.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
        x.push_back(a);
        y.push_back(b);
    }

    CorrelationResult result;
    result.n = pairs.size();
    result.pearson_r = pearson(x, y);
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    result.spearman_rho = pearson(rx, ry);
    result.kendall_tau = kendall_tau_b(x, y);

    if (options.compute_p_values) {
        if (result.pearson_r.has_value()) {
            result.p_pearson = permutation_p(x, y, *result.pearson_r, options.permutations,
                                             rng::mix(options.seed, "pearson"), pearson);
        }
        if (result.spearman_rho.has_value()) {
            result.p_spearman =
                permutation_p(rx, ry, *result.spearman_rho, options.permutations,
                              rng::mix(options.seed, "spearman"), pearson);
        }
        if (result.kendall_tau.has_value()) {
            result.p_kendall = permutation_p(x, y, *result.kendall_tau, options.permutations,
                                             rng::mix(options.seed, "kendall"), kendall_tau_b);
        }
    }
    return result;
}

}  // namespace mirrorbench::report
