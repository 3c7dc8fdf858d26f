// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include "iaoh/overhead_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

#include "iaoh/errors.hpp"
#include "iaoh/rate_analytics.hpp"

namespace iaoh {

namespace {

constexpr double kAlphaSlack = 1e-12;

double checked_alpha_min(const NetworkConfig& cfg, const FadingFrame& frame) {
  return alpha_min(cfg, frame.length);
}

struct ExpansionTerms {
  double rate = 0.0;        // R(rho)
  double slope = 0.0;       // R'(rho)
  double curvature = 0.0;   // R''(rho)
  double load = 0.0;        // 1 + rho K d
  double scale = 0.0;       // 2 beta / d
  int total_streams = 0;
};

ExpansionTerms expansion_terms(const NetworkConfig& cfg, const LinkBudget& budget) {
  const double rho = budget.per_stream_snr(cfg.streams);
  const auto point = rate_curve_point(cfg, rho);
  ExpansionTerms t;
  t.rate = point.rate;
  t.slope = point.first;
  t.curvature = point.second;
  t.total_streams = cfg.total_streams();
  t.load = 1.0 + rho * t.total_streams;
  t.scale = 2.0 * overhead_beta(cfg, budget) / cfg.streams;
  return t;
}

double expansion_value(const ExpansionTerms& t, double alpha, double doppler) {
  const double x = t.scale / alpha * doppler;
  const double second = t.curvature * t.load + 2.0 * t.total_streams * t.slope;
  return (1.0 - alpha) * (t.rate - t.load * t.slope * x + t.load * second * x * x / 2.0);
}

OverheadDesign make_design(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame,
                           double alpha) {
  OverheadDesign d;
  d.alpha = alpha;
  d.pre_clamp_alpha = alpha;
  d.beta = overhead_beta(cfg, budget);
  d.error_variance = optimal_error_variance(cfg, budget, alpha * frame.length);
  d.allocation = optimal_split(cfg, budget, alpha * frame.length).allocation;
  d.rate_at_alpha = effective_rate(cfg, budget, frame, alpha);
  d.rate = d.rate_at_alpha;
  return d;
}

}  // namespace

double overhead_beta(const NetworkConfig& cfg, const LinkBudget& budget) {
  const double mu = split_mu(cfg, budget);
  const double excess = static_cast<double>(cfg.users) * cfg.tx_antennas - cfg.rx_antennas;
  return mu * mu / (budget.feedback_ratio * excess);
}

double effective_rate(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame, double alpha) {
  const double lower = checked_alpha_min(cfg, frame);
  if (!(alpha >= lower - kAlphaSlack) || !(alpha <= 1.0 + kAlphaSlack)) {
    throw InvalidConfig("overhead fraction " + std::to_string(alpha) + " lies outside [alpha_min, 1]");
  }
  if (alpha >= 1.0) {
    return 0.0;
  }
  const double error = std::clamp(optimal_error_variance(cfg, budget, alpha * frame.length), 0.0, 1.0);
  const double rho = budget.per_stream_snr(cfg.streams);
  return (1.0 - alpha) * avg_sum_rate_imperfect(cfg, effective_sinr(cfg, rho, error));
}

ExpansionCoefficients expansion_coefficients(const NetworkConfig& cfg, const LinkBudget& budget, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw InvalidConfig("expansion requires alpha in (0, 1]");
  }
  const auto t = expansion_terms(cfg, budget);
  const double x = t.scale / alpha;
  ExpansionCoefficients c;
  c.c0 = t.rate;
  c.c1 = -t.load * t.slope * x;
  c.c2 = t.load * (t.curvature * t.load + 2.0 * t.total_streams * t.slope) * x * x / 2.0;
  return c;
}

double expansion_effective_rate(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame,
                                double alpha, int order) {
  if (order < 0 || order > 2) {
    throw InvalidConfig("expansion order must be 0, 1 or 2");
  }
  const auto c = expansion_coefficients(cfg, budget, alpha);
  const double fd = frame.doppler;
  double value = c.c0;
  if (order >= 1) {
    value += c.c1 * fd;
  }
  if (order >= 2) {
    value += c.c2 * fd * fd;
  }
  return (1.0 - alpha) * value;
}

OverheadDesign alpha_star_expansion(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame) {
  if (!(frame.doppler > 0.0)) {
    throw InvalidConfig("expansion requires a positive Doppler spread");
  }
  const double lower = checked_alpha_min(cfg, frame);
  const auto t = expansion_terms(cfg, budget);
  const double fd = frame.doppler;
  const double beta_over_d = t.scale / 2.0;

  const double leading = std::sqrt(t.scale * t.load * t.slope / t.rate * fd);
  const double correction = beta_over_d * (t.curvature / t.slope * t.load + 2.0 * t.total_streams) * fd;
  const double raw = leading - correction;
  const double alpha = std::clamp(raw, lower, 1.0);

  OverheadDesign d = make_design(cfg, budget, frame, alpha);
  d.pre_clamp_alpha = raw;
  d.clamped = alpha != raw;
  if (!d.clamped) {
    d.rate = t.rate - 2.0 * std::sqrt(t.scale * t.load * t.slope * t.rate * fd);
  }
  return d;
}

std::optional<double> alpha_star_cubic(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame) {
  const auto t = expansion_terms(cfg, budget);
  const double fd = frame.doppler;
  const double b = t.scale * t.load * t.slope * fd;
  const double c = t.scale * t.scale * t.load * (t.curvature * t.load + 2.0 * t.total_streams * t.slope) * fd * fd /
                   2.0;
  // Companion matrix of a^3 + p a + q with p = -(b + c)/R, q = 2c/R.
  const double p = -(b + c) / t.rate;
  const double q = 2.0 * c / t.rate;
  Eigen::Matrix3d companion;
  companion << 0.0, 0.0, -q, 1.0, 0.0, -p, 0.0, 1.0, 0.0;
  const Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);

  std::optional<double> best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (const auto& root : solver.eigenvalues()) {
    if (std::abs(root.imag()) > 1e-9 * std::max(1.0, std::abs(root.real()))) {
      continue;
    }
    const double a = root.real();
    if (!(a > 0.0) || !(a < 1.0)) {
      continue;
    }
    const double value = expansion_value(t, a, fd);
    if (value > best_value) {
      best_value = value;
      best = a;
    }
  }
  return best;
}

OverheadDesign alpha_star_numeric(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame) {
  const double lower = checked_alpha_min(cfg, frame);
  if (lower >= 1.0) {
    return make_design(cfg, budget, frame, 1.0);
  }
  auto objective = [&](double a) { return -effective_rate(cfg, budget, frame, a); };

  constexpr int kGrid = 64;
  std::vector<double> grid(kGrid);
  const double log_lo = std::log(lower);
  for (int n = 0; n < kGrid; ++n) {
    grid[static_cast<std::size_t>(n)] =
        n + 1 == kGrid ? 1.0 : std::exp(log_lo + (0.0 - log_lo) * static_cast<double>(n) / (kGrid - 1));
  }
  grid.front() = lower;
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const double v = objective(grid[n]);
    if (v < best_value) {
      best_value = v;
      best = n;
    }
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  const auto [arg, value] =
      boost::math::tools::brent_find_minima(objective, lo, hi, std::numeric_limits<double>::digits / 2);
  double alpha = arg;
  if (best_value < value) {
    alpha = grid[best];
  }

  OverheadDesign d = make_design(cfg, budget, frame, alpha);
  d.clamped = alpha - lower < 1e-6;
  return d;
}

int slope_sign_changes(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame, int points) {
  if (points < 3) {
    throw InvalidConfig("slope test needs at least three points");
  }
  const double lower = checked_alpha_min(cfg, frame);
  int changes = 0;
  int previous = 0;
  double last = effective_rate(cfg, budget, frame, lower);
  for (int n = 1; n < points; ++n) {
    const double a = lower + (1.0 - lower) * static_cast<double>(n) / (points - 1);
    const double value = effective_rate(cfg, budget, frame, std::min(a, 1.0));
    const double diff = value - last;
    const int sign = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
    if (sign != 0) {
      if (previous != 0 && sign != previous) {
        ++changes;
      }
      previous = sign;
    }
    last = value;
  }
  return changes;
}

EffectiveDof effective_dof(const NetworkConfig& cfg, const FadingFrame& frame) {
  cfg.validate();
  const double k = cfg.users;
  const double nt = cfg.tx_antennas;
  const double nr = cfg.rx_antennas;
  const double base = k * nt + k * nr;
  const double minimum = base + k * k * nt;
  if (!(frame.length > minimum)) {
    throw InvalidConfig("frame must be longer than the minimum overhead");
  }
  const double dof = k * cfg.streams;
  return {(1.0 - minimum / frame.length) * dof, (1.0 - (base + k * k * nt * nr) / frame.length) * dof};
}

}  // namespace iaoh
