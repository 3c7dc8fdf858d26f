// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Core>

namespace iaoh {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a child seed from a root seed and a path of stream indices.
///
/// Every random quantity in a Monte Carlo run is drawn from a stream keyed by
/// (root seed, point index, trial index, purpose), so results never depend on
/// how trials are scheduled across threads.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) noexcept;

/// Purpose tags for derived streams.
enum class Stream : std::uint64_t {
  forward_channels = 1,
  feedback_channels = 2,
  ia_init = 3,
  forward_training_noise = 4,
  feedback_training_noise = 5,
  feedback_noise = 6,
  trial = 7,
  allocation_search = 8,
};

constexpr std::uint64_t to_index(Stream s) noexcept { return static_cast<std::uint64_t>(s); }

/// Seeded generator for real and circularly-symmetric complex Gaussians.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  double gaussian() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  /// CN(0, variance): real and imaginary parts each carry variance/2.
  std::complex<double> complex_gaussian(double variance = 1.0);

  Eigen::MatrixXcd complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance = 1.0);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace iaoh
