#pragma once

#include <cmath>
#include <cstdint>

// Seeded randomness used for kernel generation and augmentation placement.
//
// The generator is SplitMix64 (Vigna's public-domain reference: state
// advances by 0x9E3779B97F4A7C15, output is the xor-shift-multiply
// finalizer). Normal deviates come from the textbook Box-Muller transform
// over 53-bit uniforms. Both algorithms are short enough to re-derive in
// any language, which is what makes extraction runs reproducible outside
// this codebase.

namespace rdc {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [0, bound). Rejection-free modulo is fine here; bias is
    /// below 2^-32 for the bounds this library uses.
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }
};

/// Sub-seed for stream `index` under a run seed. Fixed mixing function so
/// stream contents do not depend on generation order or thread count:
///   sub_seed(seed, index) = mix64(seed ^ mix64(index))
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index));
}

/// Standard normal sampler: Box-Muller over SplitMix64.
///   u1 in (0, 1], u2 in [0, 1)
///   r = sqrt(-2 ln u1); z0 = r cos(2 pi u2); z1 = r sin(2 pi u2)
/// The pair is consumed in order (z0 first), so a stream's n-th deviate is
/// well defined.
struct NormalSampler {
    SplitMix64 rng;
    bool has_spare = false;
    double spare = 0.0;

    explicit NormalSampler(std::uint64_t seed) : rng(seed) {}

    double next() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        const double u1 =
            static_cast<double>((rng.next() >> 11) + 1) * 0x1.0p-53;
        const double u2 = rng.next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare = r * std::sin(theta);
        has_spare = true;
        return r * std::cos(theta);
    }
};

}  // namespace rdc
