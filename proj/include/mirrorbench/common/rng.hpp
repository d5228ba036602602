#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace mirrorbench::rng {

// splitmix64 finalizer; used to mix seeds with string context so derived
// streams are decorrelated and platform-stable.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::string_view context) {
    std::uint64_t h = mix(seed);
    for (const char c : context) {
        h = mix(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    }
    return h;
}

inline std::uint64_t mix(std::uint64_t seed, std::string_view context, std::uint64_t extra) {
    return mix(mix(seed, context) ^ mix(extra));
}

// Unbiased bounded draw via Lemire's multiply-shift. std::uniform_int_distribution
// is implementation-defined, so selections would not replay across standard
// libraries; this mapping is fully specified.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
    if (bound == 0) return 0;
    while (true) {
        const std::uint64_t x = gen();
        const __uint128_t m = static_cast<__uint128_t>(x) * bound;
        const std::uint64_t low = static_cast<std::uint64_t>(m);
        if (low >= bound || low >= (-bound) % bound) {
            return static_cast<std::uint64_t>(m >> 64);
        }
    }
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Draws k distinct indices from [0, n) by partial Fisher-Yates; order of the
// returned indices is the draw order.
std::vector<std::size_t> sample_without_replacement(std::mt19937_64& gen, std::size_t n,
                                                    std::size_t k);

}  // namespace mirrorbench::rng
