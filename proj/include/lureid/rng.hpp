#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lureid {

/// Counter-based 64-bit PRNG (SplitMix64 finalizer over seed + counter).
/// Stateless per draw: the n-th output of a given (seed, stream) pair is a
/// pure function of those values, so records regenerate identically across
/// platforms and thread schedules.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(mix(seed ^ mix(stream ^ 0x9E3779B97F4A7C15ull))) {}

    std::uint64_t next_u64() { return at(counter_++); }

    /// n-th raw output, independent of generator position.
    std::uint64_t at(std::uint64_t n) const {
        return mix(base_ + n * 0x9E3779B97F4A7C15ull);
    }

    /// Uniform on [0, 1).
    double next_double() { return to_unit(next_u64()); }

    /// Uniform on [0, 2*pi).
    double next_angle() { return next_double() * 2.0 * std::numbers::pi; }

    /// Standard normal via Box-Muller (libm only, reproducible per build).
    double next_gaussian() {
        const std::uint64_t a = next_u64();
        const std::uint64_t b = next_u64();
        return gaussian_from(a, b);
    }

    /// n-th standard normal, independent of generator position.
    double gaussian_at(std::uint64_t n) const {
        return gaussian_from(at(2 * n), at(2 * n + 1));
    }

    static double gaussian_from(std::uint64_t a, std::uint64_t b) {
        // u1 in (0,1] so log() is finite.
        const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = to_unit(b);
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Derive a decorrelated child seed for worker/realization `index`.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t index = 0) {
        return mix(mix(seed ^ 0xD1B54A32D192ED03ull) + stream) +
               mix(index ^ 0xABCC5167CCAD925Full);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    static double to_unit(std::uint64_t u) {
        return static_cast<double>(u >> 11) * 0x1.0p-53;
    }

    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

/// Noise stream tags used by the simulator.
enum class NoiseStream : std::uint64_t { voltage = 1, current = 2, phases = 3 };

}  // namespace lureid
