#pragma once

#include <cstdint>
#include <random>

namespace wgof {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser; a bijective 64-bit mix.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Independent generator for replication `index` of a study seeded with `seed`.
/// Streams depend only on (seed, index), never on scheduling.
Rng derived_stream(std::uint64_t seed, std::uint64_t index);

/// Uniform draw on the open interval (0, 1) with 53 random bits.
inline double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace wgof
