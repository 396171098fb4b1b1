#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace swarmcrit {

/// Derives a child seed from a parent seed and a sequence of integer keys.
/// Pure function of its arguments; used to give every trial, particle and
/// grid cell its own stream independent of execution order.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

/// Bit pattern of a double, for keying streams on real-valued parameters.
std::uint64_t key_of(double value);

/**
 * Seedable, splittable source of uniform reals in [0, 1).
 *
 * Splitting depends only on the seed the stream was built from, never on
 * how many numbers have been drawn, so derived streams are reproducible
 * regardless of scheduling.
 */
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    [[nodiscard]] RandomStream split(std::uint64_t key) const;
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform on [0, 1) with 53 random mantissa bits.
    double uniform();
    /// Standard normal deviate (Box-Muller on uniform()).
    double normal();

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace swarmcrit
