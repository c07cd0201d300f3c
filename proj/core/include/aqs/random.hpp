#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace aqs {

// All randomness in the library flows through one explicitly seeded mt19937_64.
// The helpers below avoid std::*_distribution so that a given seed produces the
// same draw sequence on every standard library.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_double(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection; bound must be nonzero.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % bound;
}

/// Standard normal via Box-Muller (one value per call, no cached spare).
inline double standard_normal(Rng& rng) {
    const double u1 = 1.0 - uniform_double(rng);  // (0, 1]
    const double u2 = uniform_double(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925 * u2);
}

/// `count` independent uniform bits.
inline std::vector<int> random_bits(int count, Rng& rng) {
    std::vector<int> bits(static_cast<std::size_t>(count));
    for (auto& b : bits) b = static_cast<int>(rng() & 1u);
    return bits;
}

}  // namespace aqs
