#include "mirrorbench/lexdiv/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/strings.hpp"

namespace mirrorbench::lexdiv {

namespace {

std::mutex g_vocab_mutex;
std::map<std::string, std::vector<std::string>>& vocab_registry() {
    static std::map<std::string, std::vector<std::string>> registry;
    return registry;
}

bool is_ascii_punct(char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

void emit_chunk(const std::string& chunk, std::vector<std::string>& out) {
    // Peel trailing punctuation characters into their own tokens, keeping
    // their original order after the stem.
    std::size_t end = chunk.size();
    while (end > 0 && is_ascii_punct(chunk[end - 1])) --end;
    if (end == chunk.size()) {
        out.push_back(chunk);
        return;
    }
    if (end > 0) out.push_back(chunk.substr(0, end));
    for (std::size_t i = end; i < chunk.size(); ++i) {
        out.push_back(std::string(1, chunk[i]));
    }
}

TokenSequence tokenize_whitespace(std::string_view text) {
    TokenSequence seq;
    for (const std::string& chunk : strings::split_whitespace(text)) {
        emit_chunk(chunk, seq.tokens);
    }
    return seq;
}

TokenSequence tokenize_bpe(std::string_view text, const std::string& vocab_name) {
    std::vector<std::string> vocab;
    {
        std::lock_guard lock(g_vocab_mutex);
        auto it = vocab_registry().find(vocab_name);
        if (it == vocab_registry().end()) {
            throw ConfigError("unknown tokenizer vocabulary: " + vocab_name);
        }
        vocab = it->second;
    }
    TokenSequence seq;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t best_len = 0;
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < vocab.size(); ++i) {
            const std::string& candidate = vocab[i];
            if (candidate.size() > best_len && candidate.size() <= text.size() - pos &&
                text.compare(pos, candidate.size(), candidate) == 0) {
                best_len = candidate.size();
                best_idx = i;
            }
        }
        if (best_len == 0) {
            seq.tokens.push_back(std::string(1, text[pos]));
            ++pos;
        } else {
            seq.tokens.push_back(vocab[best_idx]);
            pos += best_len;
        }
    }
    return seq;
}

}  // namespace

std::string TokenizerSpec::id() const {
    if (kind == TokenizerKind::kWhitespaceFallback) {
        return "whitespace_fallback-v" + version;
    }
    return "bpe_vocab:" + vocab + "-v" + version;
}

TokenizerSpec TokenizerSpec::whitespace_fallback() {
    return TokenizerSpec{TokenizerKind::kWhitespaceFallback, "", "1"};
}

TokenizerSpec TokenizerSpec::bpe(std::string vocab_name, std::string version) {
    return TokenizerSpec{TokenizerKind::kBpeVocab, std::move(vocab_name), std::move(version)};
}

void register_bpe_vocab(const std::string& name, std::vector<std::string> vocab) {
    std::lock_guard lock(g_vocab_mutex);
    vocab_registry()[name] = std::move(vocab);
}

bool has_bpe_vocab(const std::string& name) {
    std::lock_guard lock(g_vocab_mutex);
    return vocab_registry().count(name) > 0;
}

TokenSequence tokenize(std::string_view text, const TokenizerSpec& spec) {
    if (spec.kind == TokenizerKind::kWhitespaceFallback) {
        return tokenize_whitespace(text);
    }
    return tokenize_bpe(text, spec.vocab);
}

}  // namespace mirrorbench::lexdiv
