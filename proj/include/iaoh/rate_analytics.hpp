// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include "iaoh/channel_model.hpp"

namespace iaoh {

/// E1(x) = integral over t in [1, inf) of exp(-x t) / t. Throws std::domain_error for x <= 0.
double exp_integral_e1(double x);

/// exp(x) * E1(x), evaluated without forming exp(x) for large x.
double scaled_exp_integral_e1(double x);

/// Average IA sum-rate with perfect CSI, Kd log2(e) exp(1/rho) E1(1/rho), in bits/s/Hz.
/// Returns 0 for rho <= 0.
double avg_sum_rate(const NetworkConfig& cfg, double rho);

struct RateDerivatives {
  double first = 0.0;   ///< dR/drho
  double second = 0.0;  ///< d^2R/drho^2
};

/// Closed-form first and second derivatives of avg_sum_rate with respect to rho.
RateDerivatives rate_derivatives(const NetworkConfig& cfg, double rho);

struct RateCurvePoint {
  double rho = 0.0;
  double rate = 0.0;
  double first = 0.0;
  double second = 0.0;
};
RateCurvePoint rate_curve_point(const NetworkConfig& cfg, double rho);

/// rho (1 - s) / (rho K d s + 1) for CSI error variance s in [0, 1].
double effective_sinr(const NetworkConfig& cfg, double rho, double error_variance);

struct CsiErrorState {
  double error_variance = 0.0;
  double effective_sinr = 0.0;
};
CsiErrorState csi_error_state(const NetworkConfig& cfg, double rho, double error_variance);

/// avg_sum_rate evaluated at the effective SINR; 0 when rho_eff is 0.
double avg_sum_rate_imperfect(const NetworkConfig& cfg, double effective_sinr);

}  // namespace iaoh
