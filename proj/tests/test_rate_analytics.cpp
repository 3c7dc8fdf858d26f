// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "iaoh/errors.hpp"
#include "iaoh/rate_analytics.hpp"
#include "oracles.hpp"

using namespace iaoh;

TEST_CASE("exponential integral against quadrature") {
  CHECK(exp_integral_e1(1.0) == doctest::Approx(0.2193839344).epsilon(1e-10));
  CHECK(exp_integral_e1(10.0) == doctest::Approx(4.15697e-6).epsilon(1e-5));
  for (double x : {1e-8, 1e-4, 0.01, 0.3, 0.999, 1.0, 1.001, 2.5, 7.0, 20.0, 60.0, 300.0}) {
    CAPTURE(x);
    const double quad = oracle::e1_quadrature(x);
    const double boost_value = oracle::e1_boost(x);
    CHECK(std::abs(exp_integral_e1(x) - quad) <= 1e-10 * quad);
    CHECK(std::abs(exp_integral_e1(x) - boost_value) <= 1e-10 * boost_value);
    CHECK(scaled_exp_integral_e1(x) == doctest::Approx(std::exp(x) * boost_value).epsilon(1e-10));
  }
  CHECK(scaled_exp_integral_e1(700.0) * 700.0 == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(scaled_exp_integral_e1(1e6) * 1e6 == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(exp_integral_e1(0.0), std::domain_error);
  CHECK_THROWS_AS(exp_integral_e1(-1.0), std::domain_error);
}

TEST_CASE("perfect-CSI sum-rate") {
  const NetworkConfig cfg;
  CHECK(avg_sum_rate(cfg, 1.0) == doctest::Approx(2.5810).epsilon(1e-4));
  for (double rho : {1e-3, 0.1, 1.0, 10.0, 100.0, 1e4}) {
    CAPTURE(rho);
    CHECK(avg_sum_rate(cfg, rho) == doctest::Approx(oracle::ergodic_rate(3, rho)).epsilon(1e-9));
  }
  CHECK(avg_sum_rate(cfg, 1e-4) > 0.0);
  CHECK(avg_sum_rate(cfg, 1e-4) < 1e-3);
  CHECK(std::isfinite(avg_sum_rate(cfg, 1e-3)));
  CHECK(avg_sum_rate(cfg, 0.0) == 0.0);

  const NetworkConfig two{3, 4, 4, 2};
  CHECK(avg_sum_rate(two, 10.0) == doctest::Approx(2.0 * avg_sum_rate(cfg, 10.0)));

  double previous = 0.0;
  for (double rho = 0.01; rho < 1e5; rho *= 1.7) {
    const double r = avg_sum_rate(cfg, rho);
    CHECK(r > previous);
    previous = r;
  }
}

TEST_CASE("sum-rate Monte Carlo over Rayleigh gains") {
  const NetworkConfig cfg;
  std::mt19937_64 engine(2024);
  std::exponential_distribution<double> gain(1.0);
  for (double rho : {1.0, 10.0, 100.0}) {
    double sum = 0.0;
    constexpr int kTrials = 100000;
    for (int t = 0; t < kTrials; ++t) {
      for (int s = 0; s < 3; ++s) {
        sum += std::log2(1.0 + rho * gain(engine));
      }
    }
    CHECK(sum / kTrials == doctest::Approx(avg_sum_rate(cfg, rho)).epsilon(0.005));
  }
}

TEST_CASE("rate derivatives against finite differences") {
  const NetworkConfig cfg;
  const auto rate = [&](double r) { return avg_sum_rate(cfg, r); };
  for (double rho : {0.5, 1.0, 10.0, 100.0, 1000.0}) {
    CAPTURE(rho);
    const auto d = rate_derivatives(cfg, rho);
    const double first = oracle::central_difference(rate, rho, 1e-4 * rho);
    const double second = oracle::second_difference(rate, rho, 1e-3 * rho);
    CHECK(std::abs(d.first - first) < 1e-6);
    CHECK(std::abs(d.first - first) <= 1e-7 * std::abs(first));
    CHECK(std::abs(d.second - second) < 1e-4);
    CHECK(std::abs(d.second - second) <= 1e-5 * std::abs(second));
    CHECK(d.first > 0.0);
    CHECK(d.second < 0.0);

    const auto point = rate_curve_point(cfg, rho);
    CHECK(point.rho == rho);
    CHECK(point.rate == avg_sum_rate(cfg, rho));
    CHECK(point.first == d.first);
    CHECK(point.second == d.second);
  }
  CHECK(1e6 * rate_derivatives(cfg, 1e6).first == doctest::Approx(3.0 * std::numbers::log2e).epsilon(1e-4));
  CHECK_THROWS(rate_derivatives(cfg, 0.0));
}

TEST_CASE("effective SINR") {
  const NetworkConfig cfg;
  CHECK(effective_sinr(cfg, 100.0, 0.0) == 100.0);
  CHECK(effective_sinr(cfg, 100.0, 1.0) == 0.0);
  CHECK(effective_sinr(cfg, 100.0, 0.01) == doctest::Approx(24.75));
  CHECK_THROWS_AS(effective_sinr(cfg, 10.0, -0.1), InvalidConfig);
  CHECK_THROWS_AS(effective_sinr(cfg, 10.0, 1.1), InvalidConfig);
  double previous = 1e300;
  for (double s = 0.0; s <= 1.0; s += 0.05) {
    const double r = effective_sinr(cfg, 30.0, s);
    CHECK(r < previous);
    CHECK(r <= 30.0);
    previous = r;
  }
  const auto state = csi_error_state(cfg, 100.0, 0.01);
  CHECK(state.error_variance == 0.01);
  CHECK(state.effective_sinr == doctest::Approx(24.75));
}

TEST_CASE("imperfect-CSI sum-rate") {
  const NetworkConfig cfg;
  CHECK(avg_sum_rate_imperfect(cfg, 0.0) == 0.0);
  CHECK(avg_sum_rate_imperfect(cfg, 20.0) == avg_sum_rate(cfg, 20.0));
  CHECK(avg_sum_rate_imperfect(cfg, 10.0) < avg_sum_rate_imperfect(cfg, 20.0));

  // Channel with estimated direct gains of variance 1 - s and leakage treated as
  // Gaussian noise of power K P s per stream.
  const double rho = 100.0;
  const double s = 0.01;
  const double power = rho;
  std::mt19937_64 engine(99);
  std::exponential_distribution<double> gain(1.0);
  double sum = 0.0;
  constexpr int kTrials = 100000;
  for (int t = 0; t < kTrials; ++t) {
    for (int k = 0; k < 3; ++k) {
      const double signal = power * (1.0 - s) * gain(engine);
      sum += std::log2(1.0 + signal / (3.0 * power * s + 1.0));
    }
  }
  CHECK(sum / kTrials == doctest::Approx(avg_sum_rate_imperfect(cfg, effective_sinr(cfg, rho, s))).epsilon(0.01));
}
