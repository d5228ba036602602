#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mirrorbench::hash {

// Hex-encoded SHA-256 of the input bytes.
std::string sha256_hex(std::string_view bytes);

// Canonical length-prefixed field encoder used for content-addressed keys.
// Layout per field: 1 tag byte, little-endian u64 payload length, payload.
// Doubles are encoded as their IEEE-754 bit pattern, integers as u64.
// The encoding identifier is persisted in the store metadata so cache files
// stay portable across builds.
inline constexpr const char* kEncodingId = "mb-canonical-v1/sha256";

class CanonicalEncoder {
public:
    CanonicalEncoder& field(char tag, std::string_view value);
    CanonicalEncoder& field(char tag, std::uint64_t value);
    CanonicalEncoder& field(char tag, double value);

    const std::string& bytes() const { return buffer_; }
    std::string digest_hex() const { return sha256_hex(buffer_); }

private:
    void append_raw(char tag, std::string_view payload);
    std::string buffer_;
};

}  // namespace mirrorbench::hash
