#pragma once

#include <cstdint>
#include <random>

#include "nmfkit/matrix.hpp"

namespace nmfkit {

using Rng = std::mt19937_64;

/// Uniform draw in (0, 1] built from the top 53 bits, so results do not
/// depend on the standard library's distribution implementation.
inline double uniform_open_closed(Rng& rng) {
  const std::uint64_t bits = rng() >> 11;
  return 1.0 - static_cast<double>(bits) * 0x1.0p-53;
}

/// Uniform draw in [0, 1).
inline double uniform_closed_open(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline RealMatrix random_positive(std::size_t rows, std::size_t cols, Rng& rng) {
  RealMatrix out(rows, cols);
  for (double& x : out.values()) x = uniform_open_closed(rng);
  return out;
}

/// Entries uniform in [-1, 1).
inline RealMatrix random_signed(std::size_t rows, std::size_t cols, Rng& rng) {
  RealMatrix out(rows, cols);
  for (double& x : out.values()) x = 2.0 * uniform_closed_open(rng) - 1.0;
  return out;
}

}  // namespace nmfkit
