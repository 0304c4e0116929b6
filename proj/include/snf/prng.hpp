#pragma once

#include <cstdint>

namespace snf {

// splitmix64; fully specified so generated graphs are reproducible
// across languages and platforms.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound)
    uint64_t next_below(uint64_t bound) { return next() % bound; }

    // uniform in [0, 1)
    double next_double() { return (next() >> 11) * 0x1.0p-53; }
};

}  // namespace snf
