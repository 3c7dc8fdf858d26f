// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include "iaoh/rate_analytics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "iaoh/errors.hpp"

namespace iaoh {

namespace {

constexpr double kEps = 1e-16;

// Power series: E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!). Used for x <= 1.
double e1_series(double x) {
  double term = 1.0;
  double acc = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= -x / k;
    const double contrib = term / k;
    acc += contrib;
    if (std::abs(contrib) < kEps * std::abs(acc)) {
      break;
    }
  }
  return -std::numbers::egamma - std::log(x) - acc;
}

// Modified Lentz evaluation of the continued fraction for exp(x) E1(x), x > 1.
double scaled_e1_fraction(double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      break;
    }
  }
  return h;
}

double rate_prefactor(const NetworkConfig& cfg) {
  return cfg.total_streams() * std::numbers::log2e;
}

}  // namespace

double exp_integral_e1(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("E1 is defined here for positive arguments only");
  }
  if (x <= 1.0) {
    return e1_series(x);
  }
  return std::exp(-x) * scaled_e1_fraction(x);
}

double scaled_exp_integral_e1(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("E1 is defined here for positive arguments only");
  }
  if (std::isinf(x)) {
    return 0.0;
  }
  if (x <= 1.0) {
    return std::exp(x) * e1_series(x);
  }
  return scaled_e1_fraction(x);
}

double avg_sum_rate(const NetworkConfig& cfg, double rho) {
  if (!(rho > 0.0)) {
    return 0.0;
  }
  return rate_prefactor(cfg) * scaled_exp_integral_e1(1.0 / rho);
}

RateDerivatives rate_derivatives(const NetworkConfig& cfg, double rho) {
  if (!(rho > 0.0)) {
    throw InvalidConfig("rate derivatives need rho > 0");
  }
  const double c = rate_prefactor(cfg);
  const double r = avg_sum_rate(cfg, rho);
  RateDerivatives out;
  out.first = (c - r / rho) / rho;
  out.second = -(c + out.first - 2.0 * r / rho) / (rho * rho);
  return out;
}

RateCurvePoint rate_curve_point(const NetworkConfig& cfg, double rho) {
  const RateDerivatives d = rate_derivatives(cfg, rho);
  return {rho, avg_sum_rate(cfg, rho), d.first, d.second};
}

double effective_sinr(const NetworkConfig& cfg, double rho, double error_variance) {
  if (error_variance < 0.0 || error_variance > 1.0) {
    throw InvalidConfig("CSI error variance must lie in [0, 1]");
  }
  return rho * (1.0 - error_variance) / (rho * cfg.total_streams() * error_variance + 1.0);
}

CsiErrorState csi_error_state(const NetworkConfig& cfg, double rho, double error_variance) {
  return {error_variance, effective_sinr(cfg, rho, error_variance)};
}

double avg_sum_rate_imperfect(const NetworkConfig& cfg, double effective_sinr) {
  if (effective_sinr <= 0.0) {
    return 0.0;
  }
  return avg_sum_rate(cfg, effective_sinr);
}

}  // namespace iaoh
