#pragma once

#include <cstdint>
#include <random>

namespace otsp::rng {

// All randomness in the project flows through the two primitives below so
// that every experiment is reproducible bit-for-bit from a single seed.
//
//   * splitmix64 — seed derivation / stream splitting (Steele et al. 2014).
//   * std::mt19937_64 — the draw generator; its algorithm is fixed by the
//     C++ standard, so sequences are identical across platforms.

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t splitmix64(std::uint64_t state) {
    std::uint64_t z = state + kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Per-trial seed i derived from a master seed: splitmix64(master + i*golden).
// Independent of scheduling order, so parallel sweeps stay reproducible.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + index * kGolden);
}

class Generator {
public:
    explicit Generator(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform double in [0, 1) with 53 random bits. We map bits manually
    // instead of std::uniform_real_distribution, whose output is
    // implementation-defined.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool coin(double p) { return unit() < p; }

    // Uniform integer in [0, k) by rejection, bias-free.
    std::uint64_t below(std::uint64_t k) {
        if (k <= 1) return 0;
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % k;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % k;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace otsp::rng
