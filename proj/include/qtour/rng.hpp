#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace qtour {

// Seeded RNG streams. All randomness in the library flows through these
// helpers so that runs are bit-reproducible for a fixed seed, independent
// of the standard library's distribution implementations.

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

// Uniform double in [0, 1) with exactly 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Uniform integer in [0, k), k >= 1, by rejection sampling.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t k) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % k;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % k;
}

// In-place Fisher-Yates shuffle using uniform_index draws.
template <typename T>
void shuffle_inplace(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace qtour
