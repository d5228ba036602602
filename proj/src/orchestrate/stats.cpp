#include "mirrorbench/orchestrate/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/rng.hpp"

namespace mirrorbench::orchestrate {

namespace {

// t_{0.975, df} for df = 1..30.
constexpr double kT975[30] = {
    12.706204736432095, 4.302652729911275, 3.182446305284263, 2.7764451051977987,
    2.5705818366147395, 2.4469118487916806, 2.3646242510102993, 2.306004135033371,
    2.2621571627409915, 2.2281388519649385, 2.200985160082949,  2.1788128296634177,
    2.160368656461013,  2.1447866879169273, 2.131449545559323,  2.1199052992210112,
    2.109815577833181,  2.10092204024096,   2.093024054408263,  2.0859634472658364,
    2.079613844727662,  2.0738730679040147, 2.0686576104190406, 2.0638985616280205,
    2.0595385527532946, 2.05552943864287,   2.051830516480284,  2.048407141795244,
    2.045229642132703,  2.0422724563012373};

constexpr double kZ975 = 1.959963984540054;

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (const double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_sd(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

// Regularized incomplete beta via the Lentz continued fraction.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-14;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

// Two-sided p for a t statistic with df degrees of freedom.
double t_two_sided_p(double t, double df) {
    const double x = df / (df + t * t);
    return incomplete_beta(df / 2.0, 0.5, x);
}

}  // namespace

double student_t_975(std::size_t df) {
    if (df == 0) throw ValidationError("t quantile requires df >= 1");
    if (df <= 30) return kT975[df - 1];
    const double nu = static_cast<double>(df);
    const double z = kZ975;
    const double z3 = z * z * z;
    const double z5 = z3 * z * z;
    const double z7 = z5 * z * z;
    return z + (z3 + z) / (4.0 * nu) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * nu * nu) +
           (3.0 * z7 + 19.0 * z5 + 17.0 * z3 - 15.0 * z) / (384.0 * nu * nu * nu);
}

MetricAggregate aggregate(const std::vector<double>& values, const AggregateOptions& options) {
    if (values.empty()) throw ValidationError("aggregate requires at least one value");

    MetricAggregate agg;
    agg.sample_size = values.size();
    agg.mean = mean_of(values);
    agg.standard_deviation = sample_sd(values, agg.mean);
    if (values.size() == 1) {
        agg.extras["single_sample"] = true;
    } else {
        agg.ci_half_width = student_t_975(values.size() - 1) * agg.standard_deviation /
                            std::sqrt(static_cast<double>(values.size()));
    }

    if (options.bootstrap && values.size() >= 2) {
        constexpr std::size_t kIterations = 1000;
        std::mt19937_64 gen(rng::mix(options.bootstrap_seed, "bootstrap"));
        std::vector<double> means;
        means.reserve(kIterations);
        for (std::size_t i = 0; i < kIterations; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < values.size(); ++j) {
                sum += values[rng::uniform_below(gen, values.size())];
            }
            means.push_back(sum / static_cast<double>(values.size()));
        }
        std::sort(means.begin(), means.end());
        const auto pick = [&](double q) {
            const std::size_t idx = static_cast<std::size_t>(
                std::min<double>(static_cast<double>(kIterations - 1),
                                 q * static_cast<double>(kIterations)));
            return means[idx];
        };
        agg.extras["bootstrap_ci_low"] = pick(0.025);
        agg.extras["bootstrap_ci_high"] = pick(0.975);
        agg.extras["bootstrap_iterations"] = kIterations;
    }
    return agg;
}

double welch_p_value(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) {
        throw ValidationError("welch test needs at least two values per sample");
    }
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    const double sa = sample_sd(a, ma);
    const double sb = sample_sd(b, mb);
    const double va = sa * sa / static_cast<double>(a.size());
    const double vb = sb * sb / static_cast<double>(b.size());
    if (va + vb == 0.0) return ma == mb ? 1.0 : 0.0;
    const double t = (ma - mb) / std::sqrt(va + vb);
    const double df = (va + vb) * (va + vb) /
                      (va * va / static_cast<double>(a.size() - 1) +
                       vb * vb / static_cast<double>(b.size() - 1));
    return t_two_sided_p(std::fabs(t), df);
}

Scorecard compute_scorecard(const std::string& name,
                            const std::map<std::string, double>& metric_means,
                            const std::map<std::string, double>& weights) {
    Scorecard card;
    card.name = name;
    card.weights = weights;
    double weighted_sum = 0.0;
    double weight_total = 0.0;
    for (const auto& [metric, weight] : weights) {
        const auto it = metric_means.find(metric);
        if (it == metric_means.end()) {
            card.missing_metrics.push_back(metric);
            continue;
        }
        weighted_sum += weight * it->second;
        weight_total += weight;
    }
    if (weight_total == 0.0) {
        throw ValidationError("scorecard '" + name + "': all weighted metrics missing");
    }
    card.score = weighted_sum / weight_total;
    return card;
}

}  // namespace mirrorbench::orchestrate
