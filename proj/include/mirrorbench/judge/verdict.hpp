#pragma once

#include <string>

namespace mirrorbench::judge {

enum class VerdictKind { kScore, kChoice, kBinary };

enum class Choice { kA, kB, kTie };

const char* choice_name(Choice choice);

// A parsed judge output. raw_text is preserved verbatim for audit.
struct JudgeVerdict {
    VerdictKind kind = VerdictKind::kScore;
    double score = 0.0;   // kScore, in [0,1]
    Choice choice = Choice::kTie;  // kChoice
    bool yes = false;     // kBinary
    std::string reasoning;
    std::string raw_text;
};

// Extracts the first well-formed JSON object embedded in raw_text and
// validates its verdict field against the expected kind. Choice and binary
// values match case-insensitively; scores outside [0,1] are rejected.
// Throws VerdictParseError.
JudgeVerdict parse_verdict(const std::string& raw_text, VerdictKind expected_kind);

}  // namespace mirrorbench::judge
