#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mirrorbench::lexdiv {

enum class TokenizerKind { kBpeVocab, kWhitespaceFallback };

// Identifies a deterministic tokenization: a given (kind, vocab, version)
// always yields identical token sequences for identical input.
struct TokenizerSpec {
    TokenizerKind kind = TokenizerKind::kWhitespaceFallback;
    std::string vocab;  // vocabulary identifier; empty for whitespace_fallback
    std::string version = "1";

    // Stable identifier for anchor files and cache keys.
    std::string id() const;

    static TokenizerSpec whitespace_fallback();
    static TokenizerSpec bpe(std::string vocab_name, std::string version = "1");
};

struct TokenSequence {
    std::vector<std::string> tokens;
    std::size_t size() const { return tokens.size(); }
};

// Registers a BPE-style vocabulary under `name`. Tokenization is greedy
// longest-match over the registered token strings; unmatched bytes become
// single-byte tokens.
void register_bpe_vocab(const std::string& name, std::vector<std::string> vocab);
bool has_bpe_vocab(const std::string& name);

// Deterministic tokenization per spec. whitespace_fallback splits on Unicode
// whitespace and peels trailing ASCII punctuation into separate tokens.
// Throws ConfigError for an unregistered BPE vocabulary.
TokenSequence tokenize(std::string_view text, const TokenizerSpec& spec);

}  // namespace mirrorbench::lexdiv
