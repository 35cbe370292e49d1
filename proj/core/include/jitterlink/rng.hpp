#pragma once

#include <cstdint>
#include <random>

namespace jitterlink {

/// Derive an independent 64-bit seed for sub-stream `stream` of a run seeded with `seed`.
///
/// Uses the SplitMix64 finalizer over `seed + (stream + 1) * golden_gamma`, so distinct
/// stream indices map to well-separated generator states. Every stochastic component of
/// a simulation (motion, baseline noise, capture noise, ...) draws from its own stream.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seedable generator used by every stochastic operation in the library.
///
/// The engine is the 64-bit Mersenne Twister (std::mt19937_64), whose output sequence is
/// fixed by the C++ standard. Uniform and normal variates are derived here rather than via
/// std::*_distribution, whose algorithms are implementation-defined, so a given seed yields
/// the same stream with every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1].
    double uniform_open_closed() noexcept { return 1.0 - uniform(); }

    /// Standard normal variate (Marsaglia polar method).
    double normal() noexcept;

    double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

    std::uint64_t next_u64() noexcept { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace jitterlink
