#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace nomalpwa {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives a child seed from a parent seed and a path of stream labels.
/// Distinct paths give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path) noexcept;

/// Seedable random stream. The engine is mt19937_64, whose output sequence is
/// fixed by the standard; the variate transforms below are written out so the
/// draws are bit-identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();

    /// Exponential with unit mean.
    double exponential();

    /// Uniform integer on [0, n). n must be positive.
    std::size_t index(std::size_t n);

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace nomalpwa
