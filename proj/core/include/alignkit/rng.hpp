#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace alignkit {

// Seeded randomness with bit-reproducible results across platforms.
//
// The generator is std::mt19937_64, whose output sequence is fixed by the
// C++ standard. The standard's *distributions* are not portable, so bounded
// draws, shuffling and sampling are implemented here directly:
//   - below(n): multiply-free rejection sampling on the top bits
//   - shuffle: Fisher-Yates, descending index
//   - sample_without_replacement: partial Fisher-Yates over an index array
//   - gaussian: Box-Muller on 53-bit uniforms
class Rng {
  public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform integer in [0, n). n must be > 0.
    uint64_t below(uint64_t n) {
        // Rejection sampling over the smallest covering power of two keeps
        // the draw unbiased and platform-independent.
        if (n == 0) return 0;
        uint64_t mask = ~uint64_t{0};
        if ((n & (n - 1)) == 0) return gen_() & (n - 1);
        int bits = 64;
        while (bits > 1 && (uint64_t{1} << (bits - 1)) >= n) --bits;
        mask = (bits == 64) ? ~uint64_t{0} : ((uint64_t{1} << bits) - 1);
        for (;;) {
            uint64_t v = gen_() & mask;
            if (v < n) return v;
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = unit();
        double u2 = unit();
        while (u1 <= 0.0) u1 = unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (size_t i = items.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    // k distinct indices drawn uniformly from [0, n), returned in ascending
    // order so callers can preserve the relative order of selected items.
    std::vector<size_t> sample_indices(size_t n, size_t k);

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Derives a sub-seed for a named sampling stream so per-stream selections do
// not depend on how many other streams were drawn first.
uint64_t mix_seed(uint64_t seed, std::string_view stream);

}  // namespace alignkit
