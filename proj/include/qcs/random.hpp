#pragma once

#include <cstdint>
#include <random>

namespace qcs {

// std::*_distribution output differs between standard libraries, so all
// sampling goes through these helpers to keep seeded runs byte-identical
// across toolchains. The engine itself is fully specified by the standard.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [lo, hi] (inclusive). Rejection sampling, no modulo bias.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t draw = 0;
  do {
    draw = rng();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % span);
}

/// SplitMix64 finalizer; derives independent stream seeds from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace qcs
