#pragma once

#include <cstdint>
#include <random>

namespace sebd {

// splitmix64 finalizer (Steele/Lea/Flood). Used both as a stream seeder and as
// a stateless counter-based hash so that derived seeds and noise coins do not
// depend on evaluation order.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    return splitmix64(seed ^ (salt + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

// hash(master_seed, a, b, ...) -> child seed
template <typename... Rest>
inline uint64_t derive_seed(uint64_t seed, uint64_t first, Rest... rest) {
    uint64_t h = mix_seed(seed, first);
    if constexpr (sizeof...(rest) == 0) {
        return h;
    } else {
        return derive_seed(h, static_cast<uint64_t>(rest)...);
    }
}

// Uniform double in [0, 1) with 53 random bits. Avoids
// std::uniform_real_distribution so streams are identical across toolchains.
inline double uniform_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection; deterministic across toolchains.
inline uint64_t bounded_uniform(std::mt19937_64& rng, uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

// Order-independent noise coin for the (qubit, layer) pair: every pair gets
// the same verdict no matter when it first enters the simulated region.
inline bool noise_coin(uint64_t noise_seed, uint32_t qubit, uint32_t layer, double p) {
    if (p <= 0.0) return false;
    const uint64_t h = derive_seed(noise_seed, qubit, layer);
    return static_cast<double>(h >> 11) * 0x1.0p-53 < p;
}

}  // namespace sebd
