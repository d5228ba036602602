#include "mirrorbench/lexdiv/anchor.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <limits>

#include "mirrorbench/common/errors.hpp"

namespace mirrorbench::lexdiv {

using nlohmann::json;

AnchorResult compute_anchor(const std::vector<TokenSequence>& human_sequences, MetricId metric,
                            const LexConfig& config, const TokenizerSpec& tokenizer,
                            const std::string& dataset_id) {
    std::vector<double> values;
    std::size_t excluded = 0;
    for (const TokenSequence& seq : human_sequences) {
        const LexOutcome outcome = evaluate_metric(metric, seq, config);
        if (outcome.unstable || !outcome.value.has_value()) {
            ++excluded;
            continue;
        }
        values.push_back(*outcome.value);
    }
    if (values.size() < 2) {
        throw ValidationError("anchor unavailable: need at least 2 stable sequences, have " +
                              std::to_string(values.size()));
    }
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    const double sigma = std::sqrt(ss / static_cast<double>(values.size() - 1));

    AnchorResult result;
    result.anchor = HumanAnchor{metric, mean, sigma, values.size(), tokenizer, dataset_id};
    result.excluded = excluded;
    return result;
}

ZScore zscore(double value, const HumanAnchor& anchor) {
    if (anchor.sigma == 0.0) {
        if (value == anchor.mu) return {0.0, false};
        const double inf = std::numeric_limits<double>::infinity();
        return {value > anchor.mu ? inf : -inf, true};
    }
    return {(value - anchor.mu) / anchor.sigma, false};
}

namespace {

json tokenizer_to_json(const TokenizerSpec& spec) {
    return json{{"kind", spec.kind == TokenizerKind::kWhitespaceFallback
                             ? "whitespace_fallback"
                             : "bpe_vocab:" + spec.vocab},
                {"version", spec.version}};
}

TokenizerSpec tokenizer_from_json(const json& value) {
    TokenizerSpec spec;
    const std::string kind = value.at("kind").get<std::string>();
    if (kind.rfind("bpe_vocab:", 0) == 0) {
        spec.kind = TokenizerKind::kBpeVocab;
        spec.vocab = kind.substr(std::string("bpe_vocab:").size());
    } else {
        spec.kind = TokenizerKind::kWhitespaceFallback;
    }
    spec.version = value.at("version").get<std::string>();
    return spec;
}

}  // namespace

void save_anchor(const HumanAnchor& anchor, const std::string& path) {
    json doc{{"metric_id", metric_id_name(anchor.metric_id)},
             {"mu", anchor.mu},
             {"sigma", anchor.sigma},
             {"n", anchor.n},
             {"tokenizer", tokenizer_to_json(anchor.tokenizer)},
             {"dataset_id", anchor.dataset_id}};
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw StoreError("cannot write anchor file: " + path);
    out << doc.dump(2) << '\n';
}

HumanAnchor load_anchor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StoreError("cannot open anchor file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("malformed anchor file " + path + ": " + e.what());
    }
    HumanAnchor anchor;
    const auto metric = metric_id_from_name(doc.at("metric_id").get<std::string>());
    if (!metric) throw ValidationError("unknown metric_id in anchor file: " + path);
    anchor.metric_id = *metric;
    anchor.mu = doc.at("mu").get<double>();
    anchor.sigma = doc.at("sigma").get<double>();
    anchor.n = doc.at("n").get<std::size_t>();
    anchor.tokenizer = tokenizer_from_json(doc.at("tokenizer"));
    anchor.dataset_id = doc.at("dataset_id").get<std::string>();
    return anchor;
}

}  // namespace mirrorbench::lexdiv
