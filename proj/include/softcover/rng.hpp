#pragma once

#include <cstdint>
#include <random>

namespace softcover {

// SplitMix64 step: advances state and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

// Stream for one codebook trial. The engine is std::mt19937_64 (fully
// specified by the standard, so identical on every platform) seeded with
// splitmix64(seed + (trial + 1) * 0x9E3779B97F4A7C15).
std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial);

// Uniform integer in [0, bound) by rejection; std::uniform_int_distribution
// is implementation-defined and would break cross-platform reproducibility.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace softcover
