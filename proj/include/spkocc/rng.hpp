#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace spkocc {

// Uniform helpers built on raw mt19937_64 output. Converting bits by hand
// keeps generated values independent of the standard library's
// distribution implementations, so seeded runs reproduce byte-for-byte.
inline double rand_uniform(std::mt19937_64 &g)
{
    return static_cast<double>(g() >> 11) * 0x1.0p-53; // [0, 1)
}

inline double rand_uniform(std::mt19937_64 &g, double lo, double hi)
{
    return lo + (hi - lo) * rand_uniform(g);
}

// Inclusive integer draw via rejection sampling.
inline int64_t rand_int(std::mt19937_64 &g, int64_t lo, int64_t hi)
{
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t r;
    do {
        r = g();
    } while (r >= limit);
    return lo + static_cast<int64_t>(r % span);
}

inline bool rand_coin(std::mt19937_64 &g) { return (g() >> 63) != 0; }

inline double rand_normal(std::mt19937_64 &g)
{
    // Box-Muller; one value per call keeps the stream position predictable.
    double u1 = rand_uniform(g);
    double u2 = rand_uniform(g);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// splitmix64 finalizer; used to derive independent child seeds.
inline uint64_t mix_seed(uint64_t seed, uint64_t salt)
{
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// FNV-1a over a byte string; stable across platforms, used for config
// fingerprints in checkpoints.
inline uint64_t fnv1a64(const std::string &s)
{
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace spkocc
