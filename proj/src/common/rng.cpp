#include "mirrorbench/common/rng.hpp"

#include <numeric>

namespace mirrorbench::rng {

std::vector<std::size_t> sample_without_replacement(std::mt19937_64& gen, std::size_t n,
                                                    std::size_t k) {
    if (k > n) k = n;
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::vector<std::size_t> picked;
    picked.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_below(gen, n - i));
        std::swap(pool[i], pool[j]);
        picked.push_back(pool[i]);
    }
    return picked;
}

}  // namespace mirrorbench::rng
