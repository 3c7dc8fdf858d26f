// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace iaoh {

struct SampleMoments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

/// Two-pass moments: mean first, then central power sums.
SampleMoments sample_moments(std::span<const double> x);

/// Pearson correlation coefficient. Returns 0 for fewer than two samples.
double sample_correlation(std::span<const double> x, std::span<const double> y);

double sample_mean(std::span<const double> x);

/// Real and imaginary parts of a complex sample, split into two vectors.
struct ComplexParts {
  std::vector<double> real;
  std::vector<double> imag;
};
ComplexParts split_parts(std::span<const std::complex<double>> z);

/// Mean of |z|^2.
double mean_power(std::span<const std::complex<double>> z);

}  // namespace iaoh
