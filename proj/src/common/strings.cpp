#include "mirrorbench/common/strings.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>

namespace mirrorbench::strings {

bool is_unicode_space(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
        case 0x20: case 0x85: case 0xA0:
        case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F:
        case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

char32_t decode_utf8(std::string_view text, std::size_t& pos) {
    const auto byte = [&](std::size_t i) -> unsigned char {
        return static_cast<unsigned char>(text[i]);
    };
    const unsigned char b0 = byte(pos);
    std::size_t len = 1;
    char32_t cp = b0;
    if (b0 >= 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else if (b0 >= 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if (b0 >= 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    }
    if (len == 1 || pos + len > text.size()) {
        ++pos;
        return b0;
    }
    for (std::size_t i = 1; i < len; ++i) {
        const unsigned char bi = byte(pos + i);
        if ((bi & 0xC0) != 0x80) {
            ++pos;
            return b0;
        }
        cp = (cp << 6) | (bi & 0x3F);
    }
    pos += len;
    return cp;
}

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t last_nonspace_end = 0;
    std::size_t first_nonspace = std::string_view::npos;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t start = pos;
        const char32_t cp = decode_utf8(text, pos);
        if (!is_unicode_space(cp)) {
            if (first_nonspace == std::string_view::npos) first_nonspace = start;
            last_nonspace_end = pos;
        }
    }
    if (first_nonspace == std::string_view::npos) return {};
    begin = first_nonspace;
    return std::string(text.substr(begin, last_nonspace_end - begin));
}

std::string to_lower_ascii(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

bool starts_with(std::string_view text, std::string_view prefix) {
    return text.substr(0, prefix.size()) == prefix;
}

std::vector<std::string> split_whitespace(std::string_view text) {
    std::vector<std::string> chunks;
    std::size_t pos = 0;
    std::size_t chunk_begin = std::string_view::npos;
    while (pos < text.size()) {
        const std::size_t start = pos;
        const char32_t cp = decode_utf8(text, pos);
        if (is_unicode_space(cp)) {
            if (chunk_begin != std::string_view::npos) {
                chunks.emplace_back(text.substr(chunk_begin, start - chunk_begin));
                chunk_begin = std::string_view::npos;
            }
        } else if (chunk_begin == std::string_view::npos) {
            chunk_begin = start;
        }
    }
    if (chunk_begin != std::string_view::npos) {
        chunks.emplace_back(text.substr(chunk_begin));
    }
    return chunks;
}

double ascii_fraction(std::string_view text) {
    std::size_t pos = 0;
    std::size_t total = 0;
    std::size_t latin = 0;
    while (pos < text.size()) {
        const char32_t cp = decode_utf8(text, pos);
        ++total;
        if (cp < 0x80) ++latin;
    }
    if (total == 0) return 1.0;
    return static_cast<double>(latin) / static_cast<double>(total);
}

std::string iso8601_utc(std::int64_t unix_seconds) {
    const std::time_t t = static_cast<std::time_t>(unix_seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

std::string replace_all(std::string text, std::string_view from, std::string_view to) {
    if (from.empty()) return text;
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

}  // namespace mirrorbench::strings
