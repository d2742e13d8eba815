#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace metaseg {

// Stable 64-bit mixing for sub-seed derivation. Every module derives its
// own stream from (seed, salt) so work can be reordered or parallelized
// without changing results.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t v) {
    return mix64(seed ^ mix64(v));
}

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Deterministic RNG wrapper. std::mt19937_64 output is fully specified by
// the standard; the distribution helpers below are hand-rolled because the
// std distributions are not portable across library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform integer in [0, n). n == 0 returns 0.
    uint64_t uniform_int(uint64_t n) {
        if (n == 0) return 0;
        return next_u64() % n;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Box-Muller; consumes two uniforms per call, no cached spare.
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::mt19937_64 gen_;
};

// Position-keyed hash noise for texture rendering: depends only on
// (salt, x, y), so pixel loops parallelize with bit-identical output.
inline uint32_t pixel_hash(uint64_t salt, int32_t x, int32_t y) {
    uint64_t h = mix64(salt ^ (static_cast<uint64_t>(static_cast<uint32_t>(x)) << 32
                               | static_cast<uint32_t>(y)));
    return static_cast<uint32_t>(h >> 32);
}

// Hash noise in [0, 1).
inline double pixel_noise01(uint64_t salt, int32_t x, int32_t y) {
    return pixel_hash(salt, x, y) * 0x1.0p-32;
}

} // namespace metaseg
