#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace drw {

/// Mixes a 64-bit value (SplitMix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent sub-stream seed from a parent seed, a stream label
/// and an index. Pure function: the same triple always yields the same seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

/// Seedable generator shared by every random decision in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Distributions are implemented here rather than taken from
/// <random> so that draws are identical across standard library vendors.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound). Consumes at least one draw, even for bound == 1.
    std::uint64_t uniform_index(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

private:
    std::mt19937_64 engine_;
};

}  // namespace drw
