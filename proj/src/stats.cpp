// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include "iaoh/stats.hpp"

#include <cmath>

#include "iaoh/kernels.hpp"

namespace iaoh {

double sample_mean(std::span<const double> x) {
  if (x.empty()) {
    return 0.0;
  }
  return kernels::sum(x) / static_cast<double>(x.size());
}

SampleMoments sample_moments(std::span<const double> x) {
  SampleMoments m;
  m.count = x.size();
  if (x.size() < 2) {
    m.mean = sample_mean(x);
    return m;
  }
  const double n = static_cast<double>(x.size());
  const double rough = sample_mean(x);
  const kernels::PowerSums s = kernels::power_sums(x, rough);
  // Central moments about the true sample mean from sums about `rough`.
  const double c = s.s1 / n;
  const double r2 = s.s2 / n;
  const double r3 = s.s3 / n;
  const double r4 = s.s4 / n;
  const double m2 = r2 - c * c;
  const double m3 = r3 - 3.0 * c * r2 + 2.0 * c * c * c;
  const double m4 = r4 - 4.0 * c * r3 + 6.0 * c * c * r2 - 3.0 * c * c * c * c;
  m.mean = rough + c;
  m.variance = m2 * n / (n - 1.0);
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return m;
}

double sample_correlation(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size() < y.size() ? x.size() : y.size();
  if (n < 2) {
    return 0.0;
  }
  const double mx = sample_mean(x.first(n));
  const double my = sample_mean(y.first(n));
  const kernels::CrossSums s = kernels::cross_sums(x.first(n), y.first(n), mx, my);
  if (s.xx <= 0.0 || s.yy <= 0.0) {
    return 0.0;
  }
  return s.xy / std::sqrt(s.xx * s.yy);
}

ComplexParts split_parts(std::span<const std::complex<double>> z) {
  ComplexParts p;
  p.real.reserve(z.size());
  p.imag.reserve(z.size());
  for (const auto& v : z) {
    p.real.push_back(v.real());
    p.imag.push_back(v.imag());
  }
  return p;
}

double mean_power(std::span<const std::complex<double>> z) {
  if (z.empty()) {
    return 0.0;
  }
  std::vector<double> mag(z.size());
  kernels::squared_magnitudes(z, mag);
  return kernels::sum(mag) / static_cast<double>(z.size());
}

}  // namespace iaoh
