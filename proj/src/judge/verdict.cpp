#include "mirrorbench/judge/verdict.hpp"

#include <nlohmann/json.hpp>

#include <optional>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/strings.hpp"

namespace mirrorbench::judge {

using nlohmann::json;

const char* choice_name(Choice choice) {
    switch (choice) {
        case Choice::kA: return "A";
        case Choice::kB: return "B";
        case Choice::kTie: return "Tie";
    }
    return "Tie";
}

namespace {

// Finds balanced {...} spans (string-aware) and returns the first one that
// parses as a JSON object.
std::optional<json> first_json_object(const std::string& text) {
    for (std::size_t start = 0; start < text.size(); ++start) {
        if (text[start] != '{') continue;
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (c == '\\') {
                    escaped = true;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    json parsed = json::parse(text.substr(start, i - start + 1), nullptr, false);
                    if (!parsed.is_discarded() && parsed.is_object()) {
                        return std::optional<json>(std::move(parsed));
                    }
                    break;  // balanced but unparseable; try the next '{'
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace

JudgeVerdict parse_verdict(const std::string& raw_text, VerdictKind expected_kind) {
    const auto doc = first_json_object(raw_text);
    if (!doc.has_value()) {
        throw VerdictParseError("no JSON object found in judge output");
    }

    JudgeVerdict verdict;
    verdict.kind = expected_kind;
    verdict.raw_text = raw_text;
    if (doc->contains("reasoning") && doc->at("reasoning").is_string()) {
        verdict.reasoning = doc->at("reasoning").get<std::string>();
    }

    switch (expected_kind) {
        case VerdictKind::kScore: {
            if (!doc->contains("score") || !doc->at("score").is_number()) {
                throw VerdictParseError("judge output missing numeric score");
            }
            const double score = doc->at("score").get<double>();
            if (score < 0.0 || score > 1.0) {
                throw VerdictParseError("score out of range [0,1]: " + std::to_string(score));
            }
            verdict.score = score;
            break;
        }
        case VerdictKind::kChoice: {
            if (!doc->contains("verdict") || !doc->at("verdict").is_string()) {
                throw VerdictParseError("judge output missing verdict field");
            }
            const std::string v = strings::to_lower_ascii(doc->at("verdict").get<std::string>());
            if (v == "a") verdict.choice = Choice::kA;
            else if (v == "b") verdict.choice = Choice::kB;
            else if (v == "tie") verdict.choice = Choice::kTie;
            else throw VerdictParseError("invalid choice verdict: " + v);
            break;
        }
        case VerdictKind::kBinary: {
            if (!doc->contains("verdict") || !doc->at("verdict").is_string()) {
                throw VerdictParseError("judge output missing verdict field");
            }
            const std::string v = strings::to_lower_ascii(doc->at("verdict").get<std::string>());
            if (v == "yes") verdict.yes = true;
            else if (v == "no") verdict.yes = false;
            else throw VerdictParseError("invalid binary verdict: " + v);
            break;
        }
    }
    return verdict;
}

}  // namespace mirrorbench::judge
