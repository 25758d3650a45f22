#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace minigp {

// Seeded random stream with explicit, implementation-independent draw
// protocols so that runs replay bit-for-bit: uniform01 consumes one engine
// word, normal consumes exactly two, uniform_index consumes one per
// rejection round.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal draw via Box-Muller (no cached spare).
    double normal() {
        const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Unbiased uniform draw from {0, ..., n-1}.
    std::int64_t uniform_index(std::int64_t n) {
        const auto bound = static_cast<std::uint64_t>(n);
        const std::uint64_t threshold = (-bound) % bound;
        std::uint64_t x = engine_();
        while (x < threshold) x = engine_();
        return static_cast<std::int64_t>(x % bound);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace minigp
