// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include <optional>

#include "iaoh/channel_model.hpp"
#include "iaoh/csi_acquisition.hpp"

namespace iaoh {

/// beta = mu^2 / (gamma (K Nt - Nr)); the optimal CSI error is beta sigma^2 / (P alpha T).
double overhead_beta(const NetworkConfig& cfg, const LinkBudget& budget);

/// Exact effective sum-rate (1 - alpha) R(rho_eff) with the optimal continuous split of
/// alpha * T_frame symbols. Throws InvalidConfig for alpha outside [alpha_min, 1].
double effective_rate(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame, double alpha);

/// Series expansion of effective_rate around f_d = 0, truncated after `order` (0, 1 or 2).
double expansion_effective_rate(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame,
                                double alpha, int order = 2);

/// Coefficients of the expansion (1 - alpha) (c0 + c1 f_d + c2 f_d^2).
struct ExpansionCoefficients {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};
ExpansionCoefficients expansion_coefficients(const NetworkConfig& cfg, const LinkBudget& budget, double alpha);

/// An overhead design: fraction, integer allocation and the resulting rate.
struct OverheadDesign {
  double alpha = 0.0;            ///< chosen overhead fraction in [alpha_min, 1]
  double pre_clamp_alpha = 0.0;  ///< unconstrained optimizer output
  OverheadAllocation allocation;
  double rate = 0.0;           ///< optimal effective sum-rate reported by the method
  double rate_at_alpha = 0.0;  ///< exact effective_rate at alpha
  double beta = 0.0;
  double error_variance = 0.0;  ///< continuous optimal CSI error at alpha
  bool clamped = false;         ///< alpha was moved onto [alpha_min, 1]
};

/// Closed-form expansion of the optimal overhead fraction, clamped to [alpha_min, 1].
/// When unclamped, `rate` is R - 2 sqrt((2 beta / d)(1 + rho K d) R' R f_d); when
/// clamped it is the exact effective rate at the clamped fraction.
OverheadDesign alpha_star_expansion(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame);

/// Stationary point of the second-order expansion found from its cubic
/// R a^3 - (B + C) a + 2 C = 0. Among the real roots in (0, 1) the one maximizing the
/// expansion is returned; nullopt if there is none.
std::optional<double> alpha_star_cubic(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame);

/// Reference optimizer: grid bracketing followed by Brent's method on the exact objective.
OverheadDesign alpha_star_numeric(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame);

/// Number of sign changes of the finite-difference slope of effective_rate over a uniform
/// grid of `points` fractions in [alpha_min, 1]. A unimodal objective gives 1.
int slope_sign_changes(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame,
                       int points = 512);

/// Effective DoF (1 - overhead / T_frame) K d for two readings of the minimum overhead.
struct EffectiveDof {
  double feedback_minimum = 0.0;   ///< overhead K Nt + K Nr + K^2 Nt
  double antenna_product = 0.0;    ///< overhead K Nt + K Nr + K^2 Nt Nr
};

/// Throws InvalidConfig unless T_frame exceeds K (Nt + Nr + K Nt). The second reading is
/// reported as printed and may be negative for short frames.
EffectiveDof effective_dof(const NetworkConfig& cfg, const FadingFrame& frame);

}  // namespace iaoh
