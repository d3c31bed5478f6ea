#pragma once

#include <cstdint>
#include <random>

namespace jsnet {

// Deterministic random source. mt19937_64 has a fully specified stream, and
// the uniform/normal maps below avoid std::*_distribution, whose output is
// implementation-defined; the same seed therefore reproduces the same draws
// on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform on (0, 1]: top 53 bits, shifted into the open-below interval.
    double uniform01() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the second draw of each pair is cached.
    double normal();

    // Independent stream seed for substream `stream` of `seed`
    // (splitmix64 finalizer, so nearby inputs map to unrelated outputs).
    static std::uint64_t substream(std::uint64_t seed, std::uint64_t stream);

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace jsnet
