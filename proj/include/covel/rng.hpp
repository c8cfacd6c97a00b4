#pragma once

#include <cstdint>

namespace covel {

// SplitMix64 (Steele/Lea/Flood 2014). Chosen over std::mt19937_64 +
// std::uniform_real_distribution because the distribution's output is
// implementation-defined; this generator produces the same stream on
// every platform, which keeps seeded reports byte-identical.
//
//   state += 0x9E3779B97F4A7C15
//   z = state; z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
//   z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31
//
// Doubles are formed as (z >> 11) * 2^-53, uniform on [0, 1).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

private:
    std::uint64_t state_;
};

} // namespace covel
