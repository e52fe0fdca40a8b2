#pragma once

// Deterministic random streams for mismatch sampling and pattern generation.
//
// The generator is xoshiro256++ (Blackman & Vigna, public domain reference
// implementation), seeded through splitmix64. Substreams are derived from a
// master seed plus a textual key, so the (seed, key) pair fully determines
// every draw regardless of thread scheduling. Normal variates use the basic
// Box-Muller transform; bit-identical replay assumes the same libm build.

#include <cmath>
#include <cstdint>
#include <string_view>

namespace donn {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a 64-bit hash, used to turn substream keys into seed material.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            word = splitmix64_next(sm);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal variate (Box-Muller, cosine branch).
    double next_normal() {
        const double u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Uniform integer in [0, bound) via rejection (unbiased).
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % bound;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

/// Seed for the substream identified by `key` under `master_seed`.
inline std::uint64_t substream_seed(std::uint64_t master_seed, std::string_view key) {
    std::uint64_t x = master_seed ^ fnv1a64(key);
    return splitmix64_next(x);
}

inline Rng substream(std::uint64_t master_seed, std::string_view key) {
    return Rng(substream_seed(master_seed, key));
}

}  // namespace donn
