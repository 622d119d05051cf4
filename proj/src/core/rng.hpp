#pragma once

#include <cmath>
#include <cstdint>

namespace cellplan {

// splitmix64: the project-wide deterministic generator. All stochastic
// features (user placement, synthetic fixtures) draw from this so results
// are identical across runs and platforms.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; consumes two uniforms per call.
    double normal() {
        double u1 = 1.0 - uniform(); // (0, 1], keeps log() finite
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }
};

// Stream seed for per-site draws: site streams are independent of each
// other and of how many sites precede them.
inline SplitMix64 site_stream(std::uint64_t scenario_seed, std::size_t site_index) {
    return SplitMix64(scenario_seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(site_index) + 1));
}

} // namespace cellplan
