// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "iaoh/channel_model.hpp"

namespace iaoh {

/// Symbol counts for the three acquisition phases.
struct OverheadAllocation {
  int forward_training = 0;   ///< tau_t, >= K Nt
  int feedback_training = 0;  ///< tau_p, >= K Nr
  int feedback = 0;           ///< tau_f, >= K^2 Nt

  int total() const noexcept { return forward_training + feedback_training + feedback; }
  bool satisfies_minimums(const NetworkConfig& cfg) const noexcept;
  /// Throws InvalidConfig when a phase is shorter than its orthogonality minimum.
  void validate(const NetworkConfig& cfg) const;

  friend bool operator==(const OverheadAllocation&, const OverheadAllocation&) = default;
};

/// `groups` blocks of `rows_per_group` rows drawn from a unitary DFT of size `length`,
/// so that S_i S_k* = delta_ik I. Requires groups * rows_per_group <= length.
std::vector<CMatrix> orthogonal_sequences(int groups, int rows_per_group, int length);

/// Switches for the three noise sources; disabling one isolates the others.
struct AcquisitionNoise {
  bool forward_training = true;
  bool feedback_training = true;
  bool feedback = true;
};

/// MMSE pilot-based estimates and their per-entry statistics.
struct TrainingResult {
  ChannelMatrices estimates;
  double estimate_variance = 0.0;
  double error_variance = 0.0;
};

/// Forward training: every transmitter sends Nt orthogonal pilots over `length`
/// symbols and receiver i estimates H_ik for all k.
TrainingResult forward_training(const ChannelMatrices& forward, const NetworkConfig& cfg, const LinkBudget& budget,
                                int length, std::uint64_t seed, bool noisy = true);

/// Feedback training: every receiver sends Nr orthogonal pilots at power P_f and
/// transmitter i estimates G_li for all l.
TrainingResult feedback_training(const ChannelMatrices& feedback, const NetworkConfig& cfg, const LinkBudget& budget,
                                 int length, std::uint64_t seed, bool noisy = true);

enum class FeedbackEstimator {
  mmse,          ///< regularized with the MMSE factors
  zero_forcing,  ///< regularizers dropped
};

struct AnalogFeedbackOptions {
  FeedbackEstimator estimator = FeedbackEstimator::mmse;
  AcquisitionNoise noise;
};

/// Transmitter-side channel knowledge after the three phases.
struct CsiEstimate {
  ChannelMatrices estimates;  ///< common estimate of H_ik at every transmitter
  double error_variance = 0.0;  ///< closed-form high-SNR error variance for the allocation
  /// trace(X_i X_i*) / (tau_f P_f) per receiver; 1 on average.
  std::vector<double> feedback_energy;
};

/// Analog feedback of the receiver estimates, spread by orthogonal Psi_i, followed by
/// the cooperative linear estimate of every H_ik at the transmitters.
/// Throws SingularFeedbackChannel if the stacked feedback estimate is rank deficient.
CsiEstimate analog_feedback(const TrainingResult& forward_estimates, const TrainingResult& feedback_estimates,
                            const ChannelMatrices& feedback, const NetworkConfig& cfg, const LinkBudget& budget,
                            const OverheadAllocation& alloc, std::uint64_t seed, const AnalogFeedbackOptions& opts = {});

/// Runs forward training, feedback training and analog feedback on one channel draw.
CsiEstimate acquire_csi(const ChannelSet& channels, const NetworkConfig& cfg, const LinkBudget& budget,
                        const OverheadAllocation& alloc, std::uint64_t seed, const AnalogFeedbackOptions& opts = {});

/// The three additive contributions to the closed-form CSI error variance.
struct ErrorBreakdown {
  double forward_training = 0.0;   ///< Nt sigma^2 / (tau_t P)
  double feedback_training = 0.0;  ///< sigma^2 Nr^2 / (P (K Nt - Nr) gamma tau_p)
  double feedback = 0.0;           ///< sigma^2 K Nt Nr / (P (K Nt - Nr) gamma tau_f)
  double total() const noexcept { return forward_training + feedback_training + feedback; }
};

/// Closed-form high-SNR error variance and its three terms. Requires K Nt > Nr.
ErrorBreakdown error_terms(const NetworkConfig& cfg, const LinkBudget& budget, const OverheadAllocation& alloc);
double error_variance(const NetworkConfig& cfg, const LinkBudget& budget, const OverheadAllocation& alloc);

/// Which symbol count scales the feedback-noise term in the intermediate
/// (inverse-Wishart) expression. The second option reproduces a variant in which
/// the feedback-training length appears there instead.
enum class FeedbackNoiseLength { feedback_symbols, feedback_training_symbols };

/// Intermediate error variance before the final high-SNR simplification: keeps the
/// (1 + Nr sigma^2 / (tau_p P_f)) factor on the feedback-noise term.
double error_variance_wishart(const NetworkConfig& cfg, const LinkBudget& budget, const OverheadAllocation& alloc,
                              FeedbackNoiseLength noise_length = FeedbackNoiseLength::feedback_symbols);

/// mu = sqrt(gamma Nt (K Nt - Nr)) + Nr + sqrt(K Nt Nr).
double split_mu(const NetworkConfig& cfg, const LinkBudget& budget);

/// Fractions of the overhead budget given to (tau_t, tau_p, tau_f) by the continuous optimum.
std::array<double, 3> split_fractions(const NetworkConfig& cfg, const LinkBudget& budget);

/// Minimum error variance for a continuous overhead budget of `overhead_symbols`.
double optimal_error_variance(const NetworkConfig& cfg, const LinkBudget& budget, double overhead_symbols);

struct OverheadSplit {
  OverheadAllocation allocation;       ///< integer refinement
  std::array<double, 3> continuous{};  ///< unconstrained continuous optimum
  double error_variance_continuous = 0.0;
  double error_variance_integer = 0.0;
};

/// Optimal split of an overhead budget across the three phases, followed by an
/// integer search over the neighbors of the constrained continuous optimum.
/// Throws InfeasibleBudget when the budget cannot cover the minimum lengths.
OverheadSplit optimal_split(const NetworkConfig& cfg, const LinkBudget& budget, double overhead_symbols);

/// K (Nt + Nr + K Nt) / T_frame. Throws InfeasibleBudget for frames shorter than that.
double alpha_min(const NetworkConfig& cfg, double frame_length);

}  // namespace iaoh
