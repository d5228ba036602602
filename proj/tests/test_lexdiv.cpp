#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/rng.hpp"
#include "mirrorbench/lexdiv/anchor.hpp"
#include "mirrorbench/lexdiv/diversity.hpp"
#include "mirrorbench/lexdiv/tokenizer.hpp"
#include "oracles.hpp"

using namespace mirrorbench;
using namespace mirrorbench::lexdiv;
using mirrorbench::testing::TempDir;

namespace {

TokenSequence seq(std::vector<std::string> tokens) {
    return TokenSequence{std::move(tokens)};
}

TokenSequence repeated(const std::string& token, std::size_t count) {
    return TokenSequence{std::vector<std::string>(count, token)};
}

TokenSequence distinct(std::size_t count) {
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < count; ++i) tokens.push_back("tok" + std::to_string(i));
    return TokenSequence{std::move(tokens)};
}

}  // namespace

TEST_CASE("whitespace tokenizer splits on unicode whitespace") {
    const auto spec = TokenizerSpec::whitespace_fallback();
    CHECK(tokenize("", spec).size() == 0);
    const auto basic = tokenize("a b a", spec);
    CHECK(basic.tokens == std::vector<std::string>{"a", "b", "a"});
    const auto punct = tokenize("hello, world", spec);
    CHECK(punct.tokens == std::vector<std::string>{"hello", ",", "world"});
    const auto nbsp = tokenize("one\xC2\xA0two", spec);  // U+00A0
    CHECK(nbsp.tokens == std::vector<std::string>{"one", "two"});
    const auto multi = tokenize("done!?", spec);
    CHECK(multi.tokens == std::vector<std::string>{"done", "!", "?"});
}

TEST_CASE("bpe tokenizer is greedy longest-match and demands registration") {
    CHECK_THROWS_AS(tokenize("abc", TokenizerSpec::bpe("never-registered")), ConfigError);
    register_bpe_vocab("toy", {"ab", "abc", "c", "a", "b"});
    const auto tokens = tokenize("abcab", TokenizerSpec::bpe("toy"));
    CHECK(tokens.tokens == std::vector<std::string>{"abc", "ab"});
    const auto fallback = tokenize("abz", TokenizerSpec::bpe("toy"));
    CHECK(fallback.tokens == std::vector<std::string>{"ab", "z"});
}

TEST_CASE("spectrum counts types by occurrence") {
    const auto s1 = build_spectrum(seq({"a", "a", "b"}));
    CHECK(s1.freq.at("a") == 2);
    CHECK(s1.freq.at("b") == 1);
    CHECK(s1.spectrum.at(1) == 1);
    CHECK(s1.spectrum.at(2) == 1);
    CHECK(s1.type_count == 2);
    CHECK(s1.token_count == 3);

    const auto empty = build_spectrum(seq({}));
    CHECK(empty.type_count == 0);
    CHECK(empty.token_count == 0);

    const auto s2 = build_spectrum(seq({"a", "b", "c", "a", "b", "a"}));
    CHECK(s2.spectrum.at(1) == 1);
    CHECK(s2.spectrum.at(2) == 1);
    CHECK(s2.spectrum.at(3) == 1);
    CHECK(s2.type_count == 3);
    CHECK(s2.token_count == 6);
}

TEST_CASE("spectrum invariants hold on random sequences") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto tokens = testing::random_tokens(gen, 1 + rng::uniform_below(gen, 80), 6);
        const auto spectrum = build_spectrum(seq(tokens));
        std::uint64_t weighted = 0;
        std::uint64_t types = 0;
        for (const auto& [occurrences, count] : spectrum.spectrum) {
            weighted += occurrences * count;
            types += count;
        }
        CHECK(weighted == spectrum.token_count);
        CHECK(types == spectrum.type_count);
    }
}

TEST_CASE("mattr closed-form examples") {
    CHECK(*mattr(distinct(50), 50) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*mattr(repeated("x", 60), 50) == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(*mattr(seq({"a", "b", "a", "b", "c"}), 3) ==
          doctest::Approx(7.0 / 9.0).epsilon(1e-12));
    CHECK_FALSE(mattr(distinct(10), 50).has_value());
}

TEST_CASE("yules_k closed-form examples") {
    CHECK(*yules_k(distinct(20)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(*yules_k(repeated("x", 10)) == doctest::Approx(9000.0).epsilon(1e-12));
    CHECK(*yules_k(seq({"a", "a", "b"})) ==
          doctest::Approx(1e4 * 2.0 / 9.0).epsilon(1e-12));
    CHECK_FALSE(yules_k(seq({})).has_value());
}

TEST_CASE("hdd closed-form examples") {
    CHECK(*hdd(distinct(10), 5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*hdd(seq({"a", "a", "b"}), 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(*hdd(seq({"a", "a", "b", "b"}), 2) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK_FALSE(hdd(seq({"a", "b"}), 3).has_value());
}

TEST_CASE("metrics match brute-force oracles on random small inputs") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng::uniform_below(gen, 12);
        const auto tokens = testing::random_tokens(gen, n, 5);
        const TokenSequence ts = seq(tokens);

        CHECK(*yules_k(ts) == doctest::Approx(testing::yules_k_oracle(tokens)).epsilon(1e-12));

        const std::size_t w = 1 + rng::uniform_below(gen, n);
        CHECK(*mattr(ts, w) == doctest::Approx(testing::mattr_oracle(tokens, w)).epsilon(1e-12));

        const std::size_t s = 1 + rng::uniform_below(gen, n);
        const auto oracle = testing::hdd_sampling_oracle(tokens, s, 1234 + trial);
        REQUIRE(oracle.exact);  // N <= 12 is always enumerable
        CHECK(*hdd(ts, s) == doctest::Approx(oracle.value).epsilon(1e-9));
    }
}

TEST_CASE("yules_k and hdd are permutation invariant, mattr generally is not") {
    std::mt19937_64 gen(123);
    const std::vector<std::string> tokens = {"a", "a", "b", "c", "c", "c", "d", "a", "b"};
    std::vector<std::string> shuffled = tokens;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
        std::swap(shuffled[i - 1], shuffled[rng::uniform_below(gen, i)]);
    }
    CHECK(*yules_k(seq(tokens)) == doctest::Approx(*yules_k(seq(shuffled))).epsilon(1e-12));
    CHECK(*hdd(seq(tokens), 4) == doctest::Approx(*hdd(seq(shuffled), 4)).epsilon(1e-12));

    // A sequence whose window composition changes under a chosen permutation.
    const std::vector<std::string> ordered = {"a", "a", "b", "b"};
    const std::vector<std::string> interleaved = {"a", "b", "a", "b"};
    CHECK(*mattr(seq(ordered), 2) != *mattr(seq(interleaved), 2));
}

TEST_CASE("metrics are invariant under bijective token relabeling") {
    std::mt19937_64 gen(5);
    const auto tokens = testing::random_tokens(gen, 40, 6);
    std::vector<std::string> relabeled;
    for (const auto& t : tokens) relabeled.push_back("label-" + t + "-x");
    CHECK(*mattr(seq(tokens), 7) == doctest::Approx(*mattr(seq(relabeled), 7)).epsilon(1e-12));
    CHECK(*yules_k(seq(tokens)) == doctest::Approx(*yules_k(seq(relabeled))).epsilon(1e-12));
    CHECK(*hdd(seq(tokens), 10) == doctest::Approx(*hdd(seq(relabeled), 10)).epsilon(1e-12));
}

TEST_CASE("stability filter flags short and undefined sequences") {
    const LexConfig config{/*window=*/5, /*sample_size=*/3, /*min_tokens=*/5};
    const auto below_min = evaluate_metric(MetricId::kYulesK, seq({"a", "b", "c"}), config);
    CHECK(below_min.value.has_value());
    CHECK(below_min.unstable);

    const auto undefined = evaluate_metric(MetricId::kMattr, seq({"a", "b"}), config);
    CHECK_FALSE(undefined.value.has_value());
    CHECK(undefined.unstable);

    const auto stable = evaluate_metric(MetricId::kYulesK, distinct(10), config);
    CHECK_FALSE(stable.unstable);
}

TEST_CASE("compute_anchor uses the n-1 denominator and records exclusions") {
    const LexConfig config{/*window=*/3, /*sample_size=*/2, /*min_tokens=*/3};
    // Three sequences with hand-computable MATTR values.
    // All-distinct windows give 1.0; a constant sequence gives 1/3.
    std::vector<TokenSequence> sequences;
    sequences.push_back(distinct(6));                    // mattr = 1.0
    sequences.push_back(repeated("x", 6));               // mattr = 1/3
    sequences.push_back(seq({"a", "b"}));                // below min_tokens -> excluded
    const auto result = compute_anchor(sequences, MetricId::kMattr, config,
                                       TokenizerSpec::whitespace_fallback(), "demo");
    CHECK(result.excluded == 1);
    CHECK(result.anchor.n == 2);
    const double mu = (1.0 + 1.0 / 3.0) / 2.0;
    CHECK(result.anchor.mu == doctest::Approx(mu).epsilon(1e-12));
    const double sd = std::sqrt((std::pow(1.0 - mu, 2) + std::pow(1.0 / 3.0 - mu, 2)) / 1.0);
    CHECK(result.anchor.sigma == doctest::Approx(sd).epsilon(1e-12));

    CHECK_THROWS_AS(compute_anchor({distinct(6)}, MetricId::kMattr, config,
                                   TokenizerSpec::whitespace_fallback(), "demo"),
                    ValidationError);
}

TEST_CASE("anchor mean and sd follow the worked example") {
    // Values {0.2, 0.4, 0.6} -> mu 0.4, sigma 0.2 with the n-1 denominator.
    // Constructed via yules_k-free direct check of the formula path.
    std::vector<double> values{0.2, 0.4, 0.6};
    double mu = 0.0;
    for (double v : values) mu += v;
    mu /= 3.0;
    double ss = 0.0;
    for (double v : values) ss += (v - mu) * (v - mu);
    CHECK(mu == doctest::Approx(0.4));
    CHECK(std::sqrt(ss / 2.0) == doctest::Approx(0.2));
}

TEST_CASE("zscore handles nominal and degenerate anchors") {
    HumanAnchor anchor;
    anchor.mu = 0.4;
    anchor.sigma = 0.2;
    CHECK(zscore(0.4, anchor).value == doctest::Approx(0.0));
    CHECK(zscore(0.6, anchor).value == doctest::Approx(1.0));
    CHECK(zscore(0.5, anchor).value == doctest::Approx(0.5));
    CHECK_FALSE(zscore(0.5, anchor).degenerate);

    anchor.sigma = 0.0;
    const auto at_mu = zscore(0.4, anchor);
    CHECK(at_mu.value == 0.0);
    CHECK_FALSE(at_mu.degenerate);
    const auto above = zscore(0.5, anchor);
    CHECK(above.degenerate);
    CHECK(std::isinf(above.value));
    CHECK(above.value > 0);
    const auto below = zscore(0.3, anchor);
    CHECK(below.degenerate);
    CHECK(below.value < 0);
}

TEST_CASE("z-scoring an anchor set against itself is standardized") {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<TokenSequence> sequences;
        const std::size_t count = 5 + rng::uniform_below(gen, 10);
        for (std::size_t i = 0; i < count; ++i) {
            sequences.push_back(seq(testing::random_tokens(gen, 20 + rng::uniform_below(gen, 40),
                                                           8)));
        }
        const LexConfig config{/*window=*/10, /*sample_size=*/10, /*min_tokens=*/5};
        const auto result = compute_anchor(sequences, MetricId::kHdd, config,
                                           TokenizerSpec::whitespace_fallback(), "self");
        if (result.anchor.sigma == 0.0) continue;

        double z_sum = 0.0;
        double z_ss = 0.0;
        std::size_t n = 0;
        for (const auto& sequence : sequences) {
            const auto outcome = evaluate_metric(MetricId::kHdd, sequence, config);
            if (outcome.unstable || !outcome.value) continue;
            const double z = zscore(*outcome.value, result.anchor).value;
            z_sum += z;
            ++n;
        }
        const double z_mean = z_sum / static_cast<double>(n);
        for (const auto& sequence : sequences) {
            const auto outcome = evaluate_metric(MetricId::kHdd, sequence, config);
            if (outcome.unstable || !outcome.value) continue;
            const double z = zscore(*outcome.value, result.anchor).value;
            z_ss += (z - z_mean) * (z - z_mean);
        }
        const double z_sd = std::sqrt(z_ss / static_cast<double>(n - 1));
        CHECK(std::fabs(z_mean) < 1e-12);
        CHECK(std::fabs(z_sd - 1.0) < 1e-12);
    }
}

TEST_CASE("anchor JSON persistence round-trips") {
    TempDir dir;
    HumanAnchor anchor;
    anchor.metric_id = MetricId::kHdd;
    anchor.mu = 0.7321;
    anchor.sigma = 0.0456;
    anchor.n = 137;
    anchor.tokenizer = TokenizerSpec::bpe("toy-vocab", "3");
    anchor.dataset_id = "demo";
    const std::string path = dir.file("anchor.json");
    save_anchor(anchor, path);
    const auto loaded = load_anchor(path);
    CHECK(loaded.metric_id == MetricId::kHdd);
    CHECK(loaded.mu == doctest::Approx(anchor.mu));
    CHECK(loaded.sigma == doctest::Approx(anchor.sigma));
    CHECK(loaded.n == 137);
    CHECK(loaded.tokenizer.kind == TokenizerKind::kBpeVocab);
    CHECK(loaded.tokenizer.vocab == "toy-vocab");
    CHECK(loaded.tokenizer.version == "3");
    CHECK(loaded.dataset_id == "demo");
}

TEST_CASE("metric ranges hold on random inputs") {
    std::mt19937_64 gen(55);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng::uniform_below(gen, 50);
        const auto tokens = testing::random_tokens(gen, n, 7);
        const TokenSequence ts = seq(tokens);
        const std::size_t w = 1 + rng::uniform_below(gen, n);
        const std::size_t s = 1 + rng::uniform_below(gen, n);
        const double m = *mattr(ts, w);
        CHECK(m > 0.0);
        CHECK(m <= 1.0 + 1e-12);
        CHECK(*yules_k(ts) >= 0.0);
        const double h = *hdd(ts, s);
        CHECK(h > 0.0);
        CHECK(h <= 1.0 + 1e-9);
    }
}
