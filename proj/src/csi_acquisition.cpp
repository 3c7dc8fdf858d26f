// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include "iaoh/csi_acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

#include "iaoh/errors.hpp"
#include "iaoh/rng.hpp"

namespace iaoh {

namespace {

void require_length(int length, int minimum, const char* phase) {
  if (length < minimum) {
    throw InvalidConfig(std::string(phase) + " length " + std::to_string(length) + " is below the minimum " +
                        std::to_string(minimum));
  }
}

void require_excess_tx(const NetworkConfig& cfg) {
  if (cfg.users * cfg.tx_antennas <= cfg.rx_antennas) {
    throw InvalidConfig("closed-form error variance requires K*Nt > Nr");
  }
}

// MMSE pilot training shared by both directions. channels(a, b) is observed at node a
// from node b, each b owning one group of `rows` pilot rows.
TrainingResult pilot_training(const ChannelMatrices& channels, double pilot_power_per_antenna, double noise_power,
                              int length, std::uint64_t seed, Stream purpose, bool noisy) {
  const int users = channels.users();
  const auto rows = static_cast<int>(channels.rows());
  const auto cols = static_cast<int>(channels.cols());

  TrainingResult out{ChannelMatrices(users, rows, cols), 1.0, 0.0};
  if (!noisy) {
    out.estimates = channels;
    return out;
  }

  const double amplitude = std::sqrt(length * pilot_power_per_antenna);
  const double energy = amplitude * amplitude;
  const double scale = amplitude / (noise_power + energy);
  out.estimate_variance = energy / (noise_power + energy);
  out.error_variance = noise_power / (noise_power + energy);

  const auto pilots = orthogonal_sequences(users, cols, length);
  CMatrix stacked(static_cast<Eigen::Index>(users) * cols, length);
  for (int b = 0; b < users; ++b) {
    stacked.middleRows(static_cast<Eigen::Index>(b) * cols, cols) = pilots[static_cast<std::size_t>(b)];
  }

  Rng rng(derive_seed(seed, {to_index(purpose)}));
  for (int a = 0; a < users; ++a) {
    CMatrix received = amplitude * (channels.hconcat_row(a) * stacked);
    received += rng.complex_gaussian(rows, length, noise_power);
    for (int b = 0; b < users; ++b) {
      out.estimates(a, b) = scale * (received * pilots[static_cast<std::size_t>(b)].adjoint());
    }
  }
  return out;
}

}  // namespace

bool OverheadAllocation::satisfies_minimums(const NetworkConfig& cfg) const noexcept {
  return forward_training >= cfg.min_forward_training() && feedback_training >= cfg.min_feedback_training() &&
         feedback >= cfg.min_feedback();
}

void OverheadAllocation::validate(const NetworkConfig& cfg) const {
  require_length(forward_training, cfg.min_forward_training(), "forward training");
  require_length(feedback_training, cfg.min_feedback_training(), "feedback training");
  require_length(feedback, cfg.min_feedback(), "analog feedback");
}

std::vector<CMatrix> orthogonal_sequences(int groups, int rows_per_group, int length) {
  if (groups < 1 || rows_per_group < 1 || groups * rows_per_group > length) {
    throw InvalidConfig("orthogonal bank needs groups * rows <= length");
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(length));
  const double step = -2.0 * std::numbers::pi / static_cast<double>(length);
  std::vector<CMatrix> bank;
  bank.reserve(static_cast<std::size_t>(groups));
  for (int g = 0; g < groups; ++g) {
    CMatrix block(rows_per_group, length);
    for (int r = 0; r < rows_per_group; ++r) {
      const long long row = static_cast<long long>(g) * rows_per_group + r;
      for (int n = 0; n < length; ++n) {
        const long long phase_index = (row * n) % length;
        block(r, n) = std::polar(norm, step * static_cast<double>(phase_index));
      }
    }
    bank.push_back(std::move(block));
  }
  return bank;
}

TrainingResult forward_training(const ChannelMatrices& forward, const NetworkConfig& cfg, const LinkBudget& budget,
                                int length, std::uint64_t seed, bool noisy) {
  cfg.validate();
  budget.validate();
  require_length(length, cfg.min_forward_training(), "forward training");
  return pilot_training(forward, budget.power / cfg.tx_antennas, budget.noise_power, length, seed,
                        Stream::forward_training_noise, noisy);
}

TrainingResult feedback_training(const ChannelMatrices& feedback, const NetworkConfig& cfg, const LinkBudget& budget,
                                 int length, std::uint64_t seed, bool noisy) {
  cfg.validate();
  budget.validate();
  require_length(length, cfg.min_feedback_training(), "feedback training");
  // feedback(l, i) is observed at transmitter i, so train on the transposed grid.
  ChannelMatrices at_tx(feedback.users(), feedback.rows(), feedback.cols());
  for (int i = 0; i < feedback.users(); ++i) {
    for (int l = 0; l < feedback.users(); ++l) {
      at_tx(i, l) = feedback(l, i);
    }
  }
  TrainingResult trained = pilot_training(at_tx, budget.feedback_power() / cfg.rx_antennas, budget.noise_power,
                                          length, seed, Stream::feedback_training_noise, noisy);
  ChannelMatrices estimates(feedback.users(), feedback.rows(), feedback.cols());
  for (int i = 0; i < feedback.users(); ++i) {
    for (int l = 0; l < feedback.users(); ++l) {
      estimates(l, i) = trained.estimates(i, l);
    }
  }
  trained.estimates = std::move(estimates);
  return trained;
}

CsiEstimate analog_feedback(const TrainingResult& forward_estimates, const TrainingResult& feedback_estimates,
                            const ChannelMatrices& feedback, const NetworkConfig& cfg, const LinkBudget& budget,
                            const OverheadAllocation& alloc, std::uint64_t seed, const AnalogFeedbackOptions& opts) {
  cfg.validate();
  budget.validate();
  require_length(alloc.feedback, cfg.min_feedback(), "analog feedback");

  const int users = cfg.users;
  const int nt = cfg.tx_antennas;
  const int nr = cfg.rx_antennas;
  const int tau_f = alloc.feedback;
  const double pf = budget.feedback_power();
  const double sigma2 = budget.noise_power;

  const double r = forward_estimates.estimate_variance;
  const double gamma1 = 1.0 / r - 1.0;
  const double feedback_noise = opts.noise.feedback ? sigma2 : 0.0;
  const double gamma2 =
      (1.0 + gamma1) * (feedback_noise * users * nt * nr / (tau_f * pf) + nr * feedback_estimates.error_variance);

  const double c = std::sqrt(tau_f * pf / (static_cast<double>(users) * nt * nr * r));
  const double c_eff = c * r;

  const auto spreading = orthogonal_sequences(users, users * nt, tau_f);

  CsiEstimate out;
  out.estimates = ChannelMatrices(users, nr, nt);
  out.feedback_energy.resize(static_cast<std::size_t>(users));

  // Every transmitter observes the same superposition (cooperation is exact).
  CMatrix observed = CMatrix::Zero(static_cast<Eigen::Index>(users) * nt, tau_f);
  for (int i = 0; i < users; ++i) {
    const CMatrix sent = c * (forward_estimates.estimates.hconcat_row(i) * spreading[static_cast<std::size_t>(i)]);
    out.feedback_energy[static_cast<std::size_t>(i)] = sent.squaredNorm() / (tau_f * pf);
    observed.noalias() += feedback.vstack_row(i) * sent;
  }
  if (opts.noise.feedback) {
    Rng rng(derive_seed(seed, {to_index(Stream::feedback_noise)}));
    observed += rng.complex_gaussian(observed.rows(), tau_f, sigma2);
  }

  const bool mmse = opts.estimator == FeedbackEstimator::mmse;
  for (int i = 0; i < users; ++i) {
    const CMatrix g_hat = feedback_estimates.estimates.vstack_row(i);
    CMatrix gram = g_hat.adjoint() * g_hat;
    if (mmse) {
      gram *= (1.0 + gamma1);
      gram.diagonal().array() += gamma2;
    }
    const Eigen::LLT<CMatrix> llt(gram);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e3 * std::numeric_limits<double>::epsilon())) {
      throw SingularFeedbackChannel("stacked feedback-channel estimate of receiver " + std::to_string(i) +
                                    " is singular");
    }
    const CMatrix despread = observed * spreading[static_cast<std::size_t>(i)].adjoint();
    const CMatrix h_i = llt.solve(g_hat.adjoint() * despread) / c_eff;
    for (int k = 0; k < users; ++k) {
      out.estimates(i, k) = h_i.middleCols(static_cast<Eigen::Index>(k) * nt, nt);
    }
  }

  if (users * nt > nr) {
    out.error_variance = error_variance(cfg, budget, alloc);
  } else {
    out.error_variance = std::numeric_limits<double>::infinity();
  }
  return out;
}

CsiEstimate acquire_csi(const ChannelSet& channels, const NetworkConfig& cfg, const LinkBudget& budget,
                        const OverheadAllocation& alloc, std::uint64_t seed, const AnalogFeedbackOptions& opts) {
  alloc.validate(cfg);
  const auto fwd = forward_training(channels.forward, cfg, budget, alloc.forward_training, seed,
                                    opts.noise.forward_training);
  const auto fb = feedback_training(channels.feedback, cfg, budget, alloc.feedback_training, seed,
                                    opts.noise.feedback_training);
  return analog_feedback(fwd, fb, channels.feedback, cfg, budget, alloc, seed, opts);
}

ErrorBreakdown error_terms(const NetworkConfig& cfg, const LinkBudget& budget, const OverheadAllocation& alloc) {
  cfg.validate();
  budget.validate();
  alloc.validate(cfg);
  require_excess_tx(cfg);
  const double k = cfg.users;
  const double nt = cfg.tx_antennas;
  const double nr = cfg.rx_antennas;
  const double s2 = budget.noise_power;
  const double p = budget.power;
  const double g = budget.feedback_ratio;
  const double excess = k * nt - nr;
  ErrorBreakdown e;
  e.forward_training = nt * s2 / (alloc.forward_training * p);
  e.feedback_training = s2 * nr * nr / (p * excess * g * alloc.feedback_training);
  e.feedback = s2 * k * nt * nr / (p * excess * g * alloc.feedback);
  return e;
}

double error_variance(const NetworkConfig& cfg, const LinkBudget& budget, const OverheadAllocation& alloc) {
  return error_terms(cfg, budget, alloc).total();
}

double error_variance_wishart(const NetworkConfig& cfg, const LinkBudget& budget, const OverheadAllocation& alloc,
                              FeedbackNoiseLength noise_length) {
  cfg.validate();
  budget.validate();
  alloc.validate(cfg);
  require_excess_tx(cfg);
  const double k = cfg.users;
  const double nt = cfg.tx_antennas;
  const double nr = cfg.rx_antennas;
  const double s2 = budget.noise_power;
  const double pf = budget.feedback_power();
  const double tau_p = alloc.feedback_training;
  const double tau_noise =
      noise_length == FeedbackNoiseLength::feedback_symbols ? alloc.feedback : alloc.feedback_training;
  const double forward = nt * s2 / (alloc.forward_training * budget.power);
  const double back =
      s2 / ((k * nt - nr) * pf) * (nr * nr / tau_p + k * nt * nr / tau_noise * (1.0 + nr * s2 / (tau_p * pf)));
  return forward + back;
}

double split_mu(const NetworkConfig& cfg, const LinkBudget& budget) {
  cfg.validate();
  budget.validate();
  require_excess_tx(cfg);
  const double k = cfg.users;
  const double nt = cfg.tx_antennas;
  const double nr = cfg.rx_antennas;
  return std::sqrt(budget.feedback_ratio * nt * (k * nt - nr)) + nr + std::sqrt(k * nt * nr);
}

std::array<double, 3> split_fractions(const NetworkConfig& cfg, const LinkBudget& budget) {
  const double mu = split_mu(cfg, budget);
  const double k = cfg.users;
  const double nt = cfg.tx_antennas;
  const double nr = cfg.rx_antennas;
  return {std::sqrt(budget.feedback_ratio * nt * (k * nt - nr)) / mu, nr / mu, std::sqrt(k * nt * nr) / mu};
}

double optimal_error_variance(const NetworkConfig& cfg, const LinkBudget& budget, double overhead_symbols) {
  if (!(overhead_symbols > 0.0)) {
    throw InfeasibleBudget("overhead budget must be positive");
  }
  const double mu = split_mu(cfg, budget);
  const double excess = static_cast<double>(cfg.users) * cfg.tx_antennas - cfg.rx_antennas;
  return budget.noise_power * mu * mu / (budget.feedback_ratio * budget.power * excess * overhead_symbols);
}

OverheadSplit optimal_split(const NetworkConfig& cfg, const LinkBudget& budget, double overhead_symbols) {
  cfg.validate();
  budget.validate();
  require_excess_tx(cfg);
  if (!std::isfinite(overhead_symbols)) {
    throw InfeasibleBudget("overhead budget must be finite");
  }
  const auto symbols = static_cast<long long>(std::floor(overhead_symbols + 1e-9));
  if (symbols < cfg.min_overhead()) {
    throw InfeasibleBudget("overhead budget of " + std::to_string(overhead_symbols) +
                           " symbols is below the minimum " + std::to_string(cfg.min_overhead()));
  }

  OverheadSplit out;
  const auto fractions = split_fractions(cfg, budget);
  for (std::size_t j = 0; j < 3; ++j) {
    out.continuous[j] = fractions[j] * overhead_symbols;
  }
  out.error_variance_continuous = optimal_error_variance(cfg, budget, overhead_symbols);

  // Constrained continuous optimum on the integer budget: tau_j = max(m_j, w_j / sqrt(lambda)).
  const std::array<double, 3> minimum{static_cast<double>(cfg.min_forward_training()),
                                      static_cast<double>(cfg.min_feedback_training()),
                                      static_cast<double>(cfg.min_feedback())};
  std::array<double, 3> tau{};
  std::array<bool, 3> clamped{false, false, false};
  for (int pass = 0; pass < 3; ++pass) {
    double free_budget = static_cast<double>(symbols);
    double free_weight = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (clamped[j]) {
        free_budget -= minimum[j];
      } else {
        free_weight += fractions[j];
      }
    }
    bool changed = false;
    for (std::size_t j = 0; j < 3; ++j) {
      if (clamped[j]) {
        tau[j] = minimum[j];
        continue;
      }
      tau[j] = free_budget * fractions[j] / free_weight;
      if (tau[j] < minimum[j]) {
        clamped[j] = true;
        changed = true;
      }
    }
    if (!changed) {
      break;
    }
  }

  const auto lo_t = static_cast<int>(std::floor(tau[0])) - 1;
  const auto hi_t = static_cast<int>(std::ceil(tau[0])) + 1;
  const auto lo_p = static_cast<int>(std::floor(tau[1])) - 1;
  const auto hi_p = static_cast<int>(std::ceil(tau[1])) + 1;
  double best = std::numeric_limits<double>::infinity();
  for (int t = lo_t; t <= hi_t; ++t) {
    for (int p = lo_p; p <= hi_p; ++p) {
      const OverheadAllocation candidate{t, p, static_cast<int>(symbols - t - p)};
      if (!candidate.satisfies_minimums(cfg)) {
        continue;
      }
      const double value = error_variance(cfg, budget, candidate);
      if (value < best) {
        best = value;
        out.allocation = candidate;
      }
    }
  }
  if (!std::isfinite(best)) {
    throw InfeasibleBudget("no integer allocation near the continuous optimum meets the minimums");
  }
  out.error_variance_integer = best;
  return out;
}

double alpha_min(const NetworkConfig& cfg, double frame_length) {
  cfg.validate();
  const double needed = cfg.min_overhead();
  if (!(frame_length >= needed)) {
    throw InfeasibleBudget("frame of " + std::to_string(frame_length) + " symbols cannot hold the minimum " +
                           std::to_string(cfg.min_overhead()) + " overhead symbols");
  }
  return needed / frame_length;
}

}  // namespace iaoh
