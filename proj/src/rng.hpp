#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace croann {

/// Seedable random source. Every stochastic choice in the library flows
/// through one of these so that a seed fully determines a run. The raw
/// generator is mt19937_64 and all derived draws are computed from its
/// output with fixed arithmetic, so sequences are identical across
/// platforms and standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::size_t index(std::size_t n) {
        const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    /// True with probability p.
    bool coin(double p) { return uniform() < p; }

    /// Gaussian with mean 0 and the given standard deviation. Box-Muller,
    /// cosine branch only: a call always consumes exactly two uniforms.
    double gaussian(double stddev) {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return stddev * std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    std::uint64_t next_u64() { return gen_(); }

    /// Derives an independent stream seed from a base seed (splitmix64
    /// finalizer). Used to keep e.g. the split permutation and the engine
    /// draws of one trial on unrelated sequences.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace croann
