#pragma once

#include <cstdint>

#include "qpperc/lattice.hpp"

namespace qpperc {

/// splitmix64 finalizer; the standard seeding/mixing primitive.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// xoshiro256++ keyed by a 64-bit stream key. Each Poisson line of each
/// trial gets its own key, so any line can be regenerated independently
/// and trials parallelize without shared state.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t key) {
        // recommended init: fill the state from a splitmix64 walk
        std::uint64_t x = key;
        for (auto& w : s_) {
            x += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            w = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

/// Stream key for one Poisson line: kind tag 0 = death line at a vertex,
/// 1 = bond line at an edge. Distinct (seed, trial, line) tuples map to
/// distinct keys up to hash collisions.
inline std::uint64_t line_stream_key(std::uint64_t seed, std::uint64_t trial, int kind_tag,
                                     const LatticePoint& position, int axis) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ mix64(trial));
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(kind_tag) * 2u + 1u));
    for (std::int64_t c : position) h = mix64(h ^ mix64(static_cast<std::uint64_t>(c)));
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(axis + 1)));
    return h;
}

/// Generic sub-stream key for auxiliary randomness (query sampling in tests,
/// repetition loops). `salt` distinguishes use sites.
inline std::uint64_t derived_key(std::uint64_t seed, std::uint64_t salt, std::uint64_t index) {
    return mix64(mix64(seed ^ mix64(salt)) ^ mix64(index));
}

}  // namespace qpperc
