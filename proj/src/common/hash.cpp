#include "mirrorbench/common/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cstring>
#include <stdexcept>

namespace mirrorbench::hash {

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int digest_len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
    bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
              EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) == 1 &&
              EVP_DigestFinal_ex(ctx, digest.data(), &digest_len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw std::runtime_error("SHA-256 digest failed");

    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(digest_len * 2);
    for (unsigned int i = 0; i < digest_len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0x0F]);
    }
    return out;
}

void CanonicalEncoder::append_raw(char tag, std::string_view payload) {
    buffer_.push_back(tag);
    const std::uint64_t len = payload.size();
    for (int i = 0; i < 8; ++i) {
        buffer_.push_back(static_cast<char>((len >> (8 * i)) & 0xFF));
    }
    buffer_.append(payload);
}

CanonicalEncoder& CanonicalEncoder::field(char tag, std::string_view value) {
    append_raw(tag, value);
    return *this;
}

CanonicalEncoder& CanonicalEncoder::field(char tag, std::uint64_t value) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
    append_raw(tag, std::string_view(buf, 8));
    return *this;
}

CanonicalEncoder& CanonicalEncoder::field(char tag, double value) {
    std::uint64_t bits = 0;
    static_assert(sizeof(bits) == sizeof(value));
    std::memcpy(&bits, &value, sizeof(bits));
    return field(tag, bits);
}

}  // namespace mirrorbench::hash
