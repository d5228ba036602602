#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mirrorbench::orchestrate {

// Unit-level aggregate: mean, sample standard deviation (n-1 denominator),
// and the 95% confidence half-width t_{0.975,n-1} * sd / sqrt(n).
struct MetricAggregate {
    double mean = 0.0;
    double standard_deviation = 0.0;
    double ci_half_width = 0.0;
    std::optional<double> p_value;
    std::size_t sample_size = 0;
    nlohmann::json extras = nlohmann::json::object();
};

struct AggregateOptions {
    bool bootstrap = false;  // percentile bootstrap CI, 1000 resamples
    std::uint64_t bootstrap_seed = 0;
};

// Throws ValidationError for an empty sample. n == 1 yields sd = ci = 0 with
// a degenerate flag in extras.
MetricAggregate aggregate(const std::vector<double>& values, const AggregateOptions& options = {});

// 97.5th percentile of Student's t with `df` degrees of freedom; tabulated
// for df <= 30, Cornish-Fisher expansion beyond (error < 1e-4).
double student_t_975(std::size_t df);

// Two-sided Welch t-test p-value for unequal-variance samples.
double welch_p_value(const std::vector<double>& a, const std::vector<double>& b);

// Weighted composite over present metrics, weights renormalized; metrics
// configured but absent are listed.
struct Scorecard {
    std::string name;
    double score = 0.0;
    std::map<std::string, double> weights;
    std::vector<std::string> missing_metrics;
};

// Throws ValidationError when every weighted metric is missing.
Scorecard compute_scorecard(const std::string& name,
                            const std::map<std::string, double>& metric_means,
                            const std::map<std::string, double>& weights);

}  // namespace mirrorbench::orchestrate
