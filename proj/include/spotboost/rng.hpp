#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spotboost::rng {

// splitmix64 finalizer; used to derive independent sub-seeds so per-video /
// per-candidate streams never alias.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Unbiased integer in [0, n) via rejection sampling. Deterministic across
// standard library implementations, unlike std::uniform_int_distribution.
inline std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = gen();
    } while (x >= limit);
    return x % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

// Standard normal via Box-Muller.
inline double gaussian(std::mt19937_64& gen) {
    double u1;
    do {
        u1 = uniform01(gen);
    } while (u1 <= 0.0);
    const double u2 = uniform01(gen);
    const double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// Knuth's product-of-uniforms Poisson sampler; fine for the small means
// used here.
inline std::int64_t poisson(std::mt19937_64& gen, double mean) {
    if (mean <= 0.0) {
        return 0;
    }
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01(gen);
    } while (p > limit);
    return k - 1;
}

}  // namespace spotboost::rng
