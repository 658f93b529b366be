#include "alignkit/rng.hpp"

#include <algorithm>
#include <numeric>

namespace alignkit {

std::vector<size_t> Rng::sample_indices(size_t n, size_t k) {
    if (k >= n) {
        std::vector<size_t> all(n);
        std::iota(all.begin(), all.end(), size_t{0});
        return all;
    }
    std::vector<size_t> pool(n);
    std::iota(pool.begin(), pool.end(), size_t{0});
    // Partial Fisher-Yates: after k swaps the prefix holds the sample.
    for (size_t i = 0; i < k; ++i) {
        size_t j = i + static_cast<size_t>(below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

uint64_t mix_seed(uint64_t seed, std::string_view stream) {
    // FNV-1a over the stream tag, then one splitmix64 round.
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : stream) {
        h ^= c;
        h *= 1099511628211ull;
    }
    uint64_t z = seed ^ h;
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace alignkit
