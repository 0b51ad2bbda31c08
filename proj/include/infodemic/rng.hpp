#pragma once

// Deterministic randomness. Everything random in the toolkit is a pure function of a
// 64-bit seed; streams for sub-tasks (trial, tweet, user) are derived by hashing, never
// by sharing a generator across threads.

#include <cstdint>
#include <initializer_list>
#include <cmath>
#include <random>

namespace infodemic::rng {

/// splitmix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for a sub-stream identified by `parts`. Order-sensitive.
constexpr std::uint64_t derive(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = mix(base);
    for (std::uint64_t p : parts) h = mix(h ^ mix(p + 0x632be59bd9b4e019ULL));
    return h;
}

/// Top 53 bits of `bits` as a double in [0, 1).
constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Counter-based uniform in [0, 1): the same (stream, a, b) always yields the same value.
/// Used where draws must be shared across experimental conditions (coupled sampling).
constexpr double coupled_uniform(std::uint64_t stream, std::uint64_t a, std::uint64_t b) {
    return to_unit(derive(stream, {a, b}));
}

/// Sequential generator on top of mt19937_64, whose output sequence is fixed by the
/// standard. Distributions are implemented here rather than taken from <random> because
/// the standard distributions are not reproducible across library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    std::uint64_t bits() { return engine_(); }
    double uniform() { return to_unit(engine_()); }
    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n); n > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do x = engine_();
        while (x >= limit);
        return x % n;
    }

    /// Standard normal via Box-Muller (one value per call, second discarded).
    double normal() {
        double u1;
        do u1 = uniform();
        while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925 * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace infodemic::rng
