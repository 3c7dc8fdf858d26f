// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <doctest.h>

#include "iaoh/kernels.hpp"
#include "iaoh/stats.hpp"

using namespace iaoh;
namespace k = iaoh::kernels;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed, double offset = 0.0) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(offset, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) {
    x = normal(engine);
  }
  return v;
}

bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

// Lengths that exercise the vector bodies and every tail remainder.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 101, 1000, 4099};

struct IsaGuard {
  ~IsaGuard() { k::reset_isa(); }
};

}  // namespace

TEST_CASE("scalar kernels against direct loops") {
  for (std::size_t n : kLengths) {
    const auto x = random_values(n, 11 + n, 0.3);
    const auto y = random_values(n, 99 + n, -0.7);
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0, xy = 0, xx = 0, yy = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x[i] - 0.25;
      s1 += d;
      s2 += d * d;
      s3 += d * d * d;
      s4 += d * d * d * d;
      xy += (x[i] - 0.1) * (y[i] + 0.2);
      xx += (x[i] - 0.1) * (x[i] - 0.1);
      yy += (y[i] + 0.2) * (y[i] + 0.2);
      total += x[i];
    }
    const auto p = k::scalar::power_sums(x, 0.25);
    CHECK(close(p.s1, s1));
    CHECK(close(p.s2, s2));
    CHECK(close(p.s3, s3));
    CHECK(close(p.s4, s4));
    const auto c = k::scalar::cross_sums(x, y, 0.1, -0.2);
    CHECK(close(c.xy, xy));
    CHECK(close(c.xx, xx));
    CHECK(close(c.yy, yy));
    CHECK(close(k::scalar::sum(x), total));
  }
}

TEST_CASE("vector kernels match the scalar reference") {
  for (auto isa : {k::Isa::avx2, k::Isa::neon}) {
    if (!k::isa_available(isa)) {
      MESSAGE("skipping ", k::isa_name(isa), ": not available on this CPU/build");
      continue;
    }
    for (std::size_t n : kLengths) {
      CAPTURE(n);
      const auto x = random_values(n, 5 + n, 1.5);
      const auto y = random_values(n, 6 + n);
      const auto ref_p = k::scalar::power_sums(x, 1.4);
      const auto ref_c = k::scalar::cross_sums(x, y, 1.5, 0.0);
      const double ref_s = k::scalar::sum(x);

      std::vector<std::complex<double>> z(n);
      for (std::size_t i = 0; i < n; ++i) {
        z[i] = {x[i], y[i]};
      }
      std::vector<double> ref_m(n);
      k::scalar::squared_magnitudes(z, ref_m);

      k::PowerSums p;
      k::CrossSums c;
      double s = 0.0;
      std::vector<double> m(n);
#if defined(__x86_64__) || defined(_M_X64)
      REQUIRE(isa == k::Isa::avx2);
      p = k::avx2::power_sums(x, 1.4);
      c = k::avx2::cross_sums(x, y, 1.5, 0.0);
      s = k::avx2::sum(x);
      k::avx2::squared_magnitudes(z, m);
#elif defined(__aarch64__)
      REQUIRE(isa == k::Isa::neon);
      p = k::neon::power_sums(x, 1.4);
      c = k::neon::cross_sums(x, y, 1.5, 0.0);
      s = k::neon::sum(x);
      k::neon::squared_magnitudes(z, m);
#endif
      CHECK(close(p.s1, ref_p.s1, 1e-10));
      CHECK(close(p.s2, ref_p.s2));
      CHECK(close(p.s3, ref_p.s3, 1e-10));
      CHECK(close(p.s4, ref_p.s4));
      CHECK(close(c.xy, ref_c.xy, 1e-10));
      CHECK(close(c.xx, ref_c.xx));
      CHECK(close(c.yy, ref_c.yy));
      CHECK(close(s, ref_s, 1e-10));
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(m[i] == doctest::Approx(ref_m[i]).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("dispatch selection") {
  IsaGuard guard;
  CHECK(k::isa_available(k::Isa::scalar));
  CHECK(k::force_isa(k::Isa::scalar));
  CHECK(k::active_isa() == k::Isa::scalar);
  const auto x = random_values(333, 3);
  const auto scalar_moments = sample_moments(x);
  k::reset_isa();
  const auto auto_moments = sample_moments(x);
  CHECK(auto_moments.mean == doctest::Approx(scalar_moments.mean).epsilon(1e-12));
  CHECK(auto_moments.variance == doctest::Approx(scalar_moments.variance).epsilon(1e-12));
  CHECK(auto_moments.skewness == doctest::Approx(scalar_moments.skewness).epsilon(1e-9));
  CHECK(auto_moments.excess_kurtosis == doctest::Approx(scalar_moments.excess_kurtosis).epsilon(1e-9));
#if defined(__x86_64__)
  CHECK_FALSE(k::force_isa(k::Isa::neon));
#endif
  CHECK(k::isa_name(k::Isa::avx2) == "avx2");
}

TEST_CASE("sample moments against a naive two-pass oracle") {
  const auto x = random_values(20001, 17, 1e6);
  double mean = 0.0;
  for (double v : x) {
    mean += v;
  }
  mean /= static_cast<double>(x.size());
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const auto m = sample_moments(x);
  CHECK(m.count == x.size());
  CHECK(m.mean == doctest::Approx(mean).epsilon(1e-14));
  CHECK(m.variance == doctest::Approx(m2 * n / (n - 1.0)).epsilon(1e-9));
  CHECK(m.skewness == doctest::Approx(m3 / std::pow(m2, 1.5)).epsilon(1e-6));
  CHECK(m.excess_kurtosis == doctest::Approx(m4 / (m2 * m2) - 3.0).epsilon(1e-6));

  const std::vector<double> one{3.0};
  CHECK(sample_moments(one).mean == 3.0);
  CHECK(sample_moments(one).variance == 0.0);
}

TEST_CASE("correlation and complex helpers") {
  const auto x = random_values(5000, 1);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = -2.0 * x[i] + 1.0;
  }
  CHECK(sample_correlation(x, y) == doctest::Approx(-1.0).epsilon(1e-12));
  std::vector<std::complex<double>> z{{3, 4}, {0, 1}, {1, 0}};
  CHECK(mean_power(z) == doctest::Approx(9.0));
  const auto parts = split_parts(z);
  CHECK(parts.real == std::vector<double>{3, 0, 1});
  CHECK(parts.imag == std::vector<double>{4, 1, 0});
}
