// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include <complex>
#include <span>
#include <string_view>

// Reduction kernels behind the Monte Carlo statistics. Each kernel has a scalar
// reference in namespace `scalar` and, where the build target allows, a vector
// variant (`avx2` on x86-64, `neon` on AArch64). The unqualified entry points
// dispatch to the best variant the running CPU supports.

namespace iaoh::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

/// Sums of the first four powers of (x - shift).
struct PowerSums {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double s4 = 0.0;
};

/// Sums of products of (x - sx) and (y - sy).
struct CrossSums {
  double xy = 0.0;
  double xx = 0.0;
  double yy = 0.0;
};

PowerSums power_sums(std::span<const double> x, double shift);
CrossSums cross_sums(std::span<const double> x, std::span<const double> y, double sx, double sy);
/// out[n] = |z[n]|^2. out.size() must equal z.size().
void squared_magnitudes(std::span<const std::complex<double>> z, std::span<double> out);
double sum(std::span<const double> x);

/// ISA used by the dispatching entry points.
Isa active_isa() noexcept;

/// True when `isa` can run on this CPU and was compiled in.
bool isa_available(Isa isa) noexcept;

/// Pins dispatch to `isa` (tests use this to compare variants). Returns false if unavailable.
bool force_isa(Isa isa) noexcept;

/// Restores automatic selection.
void reset_isa() noexcept;

namespace scalar {
PowerSums power_sums(std::span<const double> x, double shift) noexcept;
CrossSums cross_sums(std::span<const double> x, std::span<const double> y, double sx, double sy) noexcept;
void squared_magnitudes(std::span<const std::complex<double>> z, std::span<double> out) noexcept;
double sum(std::span<const double> x) noexcept;
}  // namespace scalar

namespace avx2 {
PowerSums power_sums(std::span<const double> x, double shift) noexcept;
CrossSums cross_sums(std::span<const double> x, std::span<const double> y, double sx, double sy) noexcept;
void squared_magnitudes(std::span<const std::complex<double>> z, std::span<double> out) noexcept;
double sum(std::span<const double> x) noexcept;
}  // namespace avx2

namespace neon {
PowerSums power_sums(std::span<const double> x, double shift) noexcept;
CrossSums cross_sums(std::span<const double> x, std::span<const double> y, double sx, double sy) noexcept;
void squared_magnitudes(std::span<const std::complex<double>> z, std::span<double> out) noexcept;
double sum(std::span<const double> x) noexcept;
}  // namespace neon

}  // namespace iaoh::kernels
