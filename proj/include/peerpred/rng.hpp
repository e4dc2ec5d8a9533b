// Deterministic, portable randomness for the simulator.
//
// mt19937_64 is fully specified by the standard, and uniform01 converts raw
// 64-bit draws with a fixed shift-and-scale, so traces are bit-identical
// across platforms and standard libraries. std::uniform_real_distribution is
// deliberately avoided: its algorithm is implementation-defined.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace peerpred {

// splitmix64 finalizer; used only for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Stream-splitting rule: substream k of a master seed gets its own
// independently seeded engine. Documented contract, frozen by tests.
inline std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(master_seed + mix64(index));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t master_seed, std::uint64_t index) {
        return Rng(substream_seed(master_seed, index));
    }

    std::uint64_t raw() { return engine_(); }

    // Uniform on [0, 1): the top 53 bits scaled by 2^-53.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Index sampled from a probability vector by CDF walk. Tolerates an
    // undersumming simplex by falling back to the last positive entry.
    int categorical(const std::vector<double>& probs) {
        double u = uniform01();
        double cum = 0.0;
        int last_positive = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] > 0.0) last_positive = static_cast<int>(i);
            cum += probs[i];
            if (u < cum) return static_cast<int>(i);
        }
        return last_positive;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace peerpred
