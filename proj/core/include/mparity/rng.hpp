#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "mparity/errors.hpp"

namespace mparity::rng {

/// Derive an independent stream seed from a base seed and a stream index
/// (splitmix64 finalizer over a Weyl sequence).  Used to give every Monte
/// Carlo event / trajectory its own engine so results do not depend on thread
/// count or evaluation order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) with 53 random bits.  Spelled out (instead of
/// std::uniform_real_distribution) so the byte-for-byte reproducibility
/// promise does not depend on a library implementation detail.
inline double canonical(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Poisson sample by inversion of the product of uniforms (Knuth).  For large
/// means the count is split into two independent halves, which keeps the
/// intermediate exp(-mean) representable; the sum of independent Poisson
/// variates with means m/2 + m/2 is Poisson with mean m.
inline std::int64_t poisson(std::mt19937_64& gen, double mean) {
    if (!(mean >= 0.0)) {
        throw InvalidArgumentError("poisson: mean must be non-negative");
    }
    if (mean == 0.0) return 0;
    if (mean > 300.0) {
        std::int64_t a = poisson(gen, mean / 2.0);
        return a + poisson(gen, mean / 2.0);
    }
    const double threshold = std::exp(-mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= canonical(gen);
    } while (p > threshold);
    return k - 1;
}

}  // namespace mparity::rng
