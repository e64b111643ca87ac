#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace coupon {

// Engine and seeding are both fully specified by the C++ standard, so the
// streams are identical across platforms; the integer/real draws below avoid
// std:: distributions, whose algorithms are implementation-defined.
inline constexpr std::string_view rng_version = "mt19937_64/seed_seq/v1";

using Engine = std::mt19937_64;

// Independent stream for (seed, trial).
inline Engine trial_engine(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return Engine(seq);
}

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// Uniform on {0, ..., bound-1} by rejection (no modulo bias).
inline std::uint64_t uniform_below(Engine& g, std::uint64_t bound) {
    const std::uint64_t threshold = (std::uint64_t(0) - bound) % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t x = g();
        if (x >= threshold) return x % bound;
    }
}

inline bool bernoulli(Engine& g, double p) { return uniform01(g) < p; }

} // namespace coupon
