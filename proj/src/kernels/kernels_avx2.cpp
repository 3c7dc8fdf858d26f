// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors
//
// Built with -mavx2 -mfma. Only reached through dispatch after a CPUID check.

#include <immintrin.h>

#include "iaoh/kernels.hpp"

namespace iaoh::kernels::avx2 {

namespace {

inline double hsum(__m256d v) noexcept {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

PowerSums power_sums(std::span<const double> x, double shift) noexcept {
  const std::size_t n = x.size();
  const double* p = x.data();
  const __m256d vshift = _mm256_set1_pd(shift);
  __m256d a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd();
  __m256d a3 = _mm256_setzero_pd();
  __m256d a4 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), vshift);
    const __m256d d2 = _mm256_mul_pd(d, d);
    a1 = _mm256_add_pd(a1, d);
    a2 = _mm256_add_pd(a2, d2);
    a3 = _mm256_fmadd_pd(d2, d, a3);
    a4 = _mm256_fmadd_pd(d2, d2, a4);
  }
  PowerSums s{hsum(a1), hsum(a2), hsum(a3), hsum(a4)};
  for (; i < n; ++i) {
    const double d = p[i] - shift;
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
  const __m256d vsx = _mm256_set1_pd(sx);
  const __m256d vsy = _mm256_set1_pd(sy);
  __m256d axy = _mm256_setzero_pd();
  __m256d axx = _mm256_setzero_pd();
  __m256d ayy = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), vsx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i), vsy);
    axy = _mm256_fmadd_pd(dx, dy, axy);
    axx = _mm256_fmadd_pd(dx, dx, axx);
    ayy = _mm256_fmadd_pd(dy, dy, ayy);
  }
  CrossSums s{hsum(axy), hsum(axx), hsum(ayy)};
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
  const std::size_t n = z.size();
  const double* p = reinterpret_cast<const double*>(z.data());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // [re0 im0 re1 im1] and [re2 im2 re3 im3]
    const __m256d a = _mm256_loadu_pd(p + 2 * i);
    const __m256d b = _mm256_loadu_pd(p + 2 * i + 4);
    // hadd gives [|z0|^2 |z2|^2 |z1|^2 |z3|^2]
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    _mm256_storeu_pd(out.data() + i, _mm256_permute4x64_pd(h, _MM_SHUFFLE(3, 1, 2, 0)));
  }
  for (; i < n; ++i) {
    out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
  }
}

double sum(std::span<const double> x) noexcept {
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x.data() + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x.data() + i + 4));
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    s += x[i];
  }
  return s;
}

}  // namespace iaoh::kernels::avx2
