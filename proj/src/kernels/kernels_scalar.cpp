// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include "iaoh/kernels.hpp"

namespace iaoh::kernels::scalar {

PowerSums power_sums(std::span<const double> x, double shift) noexcept {
  PowerSums s;
  for (double v : x) {
    const double d = v - shift;
    const double d2 = d * d;
    s.s1 += d;
    s.s2 += d2;
    s.s3 += d2 * d;
    s.s4 += d2 * d2;
  }
  return s;
}

CrossSums cross_sums(std::span<const double> x, std::span<const double> y, double sx, double sy) noexcept {
  CrossSums s;
  const std::size_t n = x.size() < y.size() ? x.size() : y.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - sx;
    const double dy = y[i] - sy;
    s.xy += dx * dy;
    s.xx += dx * dx;
    s.yy += dy * dy;
  }
  return s;
}

void squared_magnitudes(std::span<const std::complex<double>> z, std::span<double> out) noexcept {
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
  }
}

double sum(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) {
    s += v;
  }
  return s;
}

}  // namespace iaoh::kernels::scalar
