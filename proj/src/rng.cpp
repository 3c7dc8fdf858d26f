// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include "iaoh/rng.hpp"

#include <cmath>

namespace iaoh {

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = mix64(root);
  for (std::uint64_t p : path) {
    h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
  }
  return h;
}

std::complex<double> Rng::complex_gaussian(double variance) {
  const double scale = std::sqrt(variance / 2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {scale * re, scale * im};
}

Eigen::MatrixXcd Rng::complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance) {
  Eigen::MatrixXcd m(rows, cols);
  // Column-major fill keeps the draw order identical to the storage order.
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      m(r, c) = complex_gaussian(variance);
    }
  }
  return m;
}

}  // namespace iaoh
