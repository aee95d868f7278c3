#pragma once

#include <cstdint>
#include <random>

#include "ewa/matrix.hpp"

namespace ewa {

using Rng = std::mt19937_64;

// Deterministic per-stream seeds: stream j gets base xor j * golden-ratio
// increment, so stream 0 keeps the base seed unchanged.
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
  return base ^ (stream * 0x9E3779B97F4A7C15ULL);
}

inline Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline Matrix uniform_matrix(Index rows, Index cols, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = unif(rng);
  return m;
}

}  // namespace ewa
