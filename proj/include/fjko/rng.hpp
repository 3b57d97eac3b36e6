#pragma once

#include <cstdint>

namespace fjko {

/// splitmix64: tiny deterministic generator. Used for every randomized
/// test-function or field draw so runs are reproducible across platforms
/// (std distributions are implementation-defined, this is not).
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// uniform in [a, b)
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

}  // namespace fjko
