#pragma once

// Portable seeded random numbers.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Distributions are implemented here (the standard library ones
// are implementation-defined), so a seed reproduces the same doubles on every
// conforming platform.
//
// Independent streams are derived from one user seed with a splitmix64 hash
// of (seed, stream id); see stream_seed().

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace fracguide {

/// splitmix64 finalizer.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of stream `stream` derived from a user seed.
[[nodiscard]] std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    [[nodiscard]] double uniform();

    /// Uniform integer in [0, n).
    [[nodiscard]] std::uint64_t below(std::uint64_t n);

    /// Standard normal via Box-Muller (one value per call, no caching).
    [[nodiscard]] double normal();

    /// Uniform point in the closed Euclidean ball of `radius` in R^dim:
    /// uniform direction times radius * U^(1/dim).
    [[nodiscard]] Eigen::VectorXd in_ball(Eigen::Index dim, double radius);

private:
    std::mt19937_64 engine_;
};

}  // namespace fracguide
