#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mirrorbench::strings {

// Unicode-aware whitespace test over a decoded code point. Covers ASCII
// whitespace plus the common Unicode space separators.
bool is_unicode_space(char32_t cp);

// Decodes one UTF-8 code point starting at `pos`; advances `pos` past it.
// Malformed bytes are consumed one at a time and returned verbatim.
char32_t decode_utf8(std::string_view text, std::size_t& pos);

// Strips leading/trailing Unicode whitespace.
std::string trim(std::string_view text);

std::string to_lower_ascii(std::string_view text);

bool starts_with(std::string_view text, std::string_view prefix);

// Splits on runs of Unicode whitespace; no empty chunks.
std::vector<std::string> split_whitespace(std::string_view text);

// Fraction of code points that fall in the Basic Latin block; 1.0 for empty
// input. Used by the coarse default English detector.
double ascii_fraction(std::string_view text);

// "2025-01-31T12:00:00Z" from unix seconds (UTC).
std::string iso8601_utc(std::int64_t unix_seconds);

// Replaces every occurrence of `from` with `to`.
std::string replace_all(std::string text, std::string_view from, std::string_view to);

}  // namespace mirrorbench::strings
