// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors
//
// AArch64 Advanced SIMD variants. NEON is part of the AArch64 baseline, so no
// runtime probe is needed.

#include <arm_neon.h>

#include "iaoh/kernels.hpp"

namespace iaoh::kernels::neon {

PowerSums power_sums(std::span<const double> x, double shift) noexcept {
  const std::size_t n = x.size();
  const float64x2_t vshift = vdupq_n_f64(shift);
  float64x2_t a1 = vdupq_n_f64(0.0);
  float64x2_t a2 = vdupq_n_f64(0.0);
  float64x2_t a3 = vdupq_n_f64(0.0);
  float64x2_t a4 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x.data() + i), vshift);
    const float64x2_t d2 = vmulq_f64(d, d);
    a1 = vaddq_f64(a1, d);
    a2 = vaddq_f64(a2, d2);
    a3 = vfmaq_f64(a3, d2, d);
    a4 = vfmaq_f64(a4, d2, d2);
  }
  PowerSums s{vaddvq_f64(a1), vaddvq_f64(a2), vaddvq_f64(a3), vaddvq_f64(a4)};
  for (; i < n; ++i) {
    const double d = x[i] - shift;
    const double d2 = d * d;
    s.s1 += d;
    s.s2 += d2;
    s.s3 += d2 * d;
    s.s4 += d2 * d2;
  }
  return s;
}

CrossSums cross_sums(std::span<const double> x, std::span<const double> y, double sx, double sy) noexcept {
  const std::size_t n = x.size() < y.size() ? x.size() : y.size();
  const float64x2_t vsx = vdupq_n_f64(sx);
  const float64x2_t vsy = vdupq_n_f64(sy);
  float64x2_t axy = vdupq_n_f64(0.0);
  float64x2_t axx = vdupq_n_f64(0.0);
  float64x2_t ayy = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(x.data() + i), vsx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(y.data() + i), vsy);
    axy = vfmaq_f64(axy, dx, dy);
    axx = vfmaq_f64(axx, dx, dx);
    ayy = vfmaq_f64(ayy, dy, dy);
  }
  CrossSums s{vaddvq_f64(axy), vaddvq_f64(axx), vaddvq_f64(ayy)};
  for (; i < n; ++i) {
    const double dx = x[i] - sx;
    const double dy = y[i] - sy;
    s.xy += dx * dy;
    s.xx += dx * dx;
    s.yy += dy * dy;
  }
  return s;
}

void squared_magnitudes(std::span<const std::complex<double>> z, std::span<double> out) noexcept {
  const double* p = reinterpret_cast<const double*>(z.data());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const float64x2_t v = vld1q_f64(p + 2 * i);
    out[i] = vaddvq_f64(vmulq_f64(v, v));
  }
}

double sum(std::span<const double> x) noexcept {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= x.size(); i += 2) {
    acc = vaddq_f64(acc, vld1q_f64(x.data() + i));
  }
  double s = vaddvq_f64(acc);
  for (; i < x.size(); ++i) {
    s += x[i];
  }
  return s;
}

}  // namespace iaoh::kernels::neon
