// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace iaoh {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Homogeneous K-user MIMO interference network.
struct NetworkConfig {
  int users = 3;        ///< K
  int tx_antennas = 2;  ///< Nt, per transmitter
  int rx_antennas = 2;  ///< Nr, per receiver
  int streams = 1;      ///< d, per user

  /// Throws InvalidConfig unless K >= 2, Nt, Nr >= 1, 1 <= d <= min(Nt, Nr) and K*Nt >= Nr.
  void validate() const;

  /// Proper-system test for the symmetric case: d*(K+1) <= Nt + Nr.
  bool ia_feasible() const noexcept;

  /// Minimum forward-training, feedback-training and feedback lengths: K*Nt, K*Nr, K^2*Nt.
  int min_forward_training() const noexcept { return users * tx_antennas; }
  int min_feedback_training() const noexcept { return users * rx_antennas; }
  int min_feedback() const noexcept { return users * users * tx_antennas; }
  int min_overhead() const noexcept {
    return min_forward_training() + min_feedback_training() + min_feedback();
  }

  int total_streams() const noexcept { return users * streams; }

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Forward/feedback power budget. All quantities linear scale.
struct LinkBudget {
  double power = 1.0;           ///< P, forward transmit power
  double feedback_ratio = 1.0;  ///< gamma = P_f / P
  double noise_power = 1.0;     ///< sigma^2

  /// Budget with unit noise power whose per-stream SNR P/(d sigma^2) equals rho.
  static LinkBudget from_snr(double rho, int streams, double feedback_ratio = 1.0);

  double feedback_power() const noexcept { return feedback_ratio * power; }

  /// rho = P / (d sigma^2).
  double per_stream_snr(int streams) const noexcept { return power / (streams * noise_power); }

  void validate() const;
};

/// Block-fading coherence interval tied to an effective Doppler spread.
struct FadingFrame {
  double doppler = 0.0;  ///< f_d in cycles/symbol
  double length = 0.0;   ///< T_frame = 1 / (2 f_d) symbols
  std::optional<double> overhead_fraction;

  /// alpha * T_frame. Requires overhead_fraction to be set.
  double overhead_symbols() const;
};

/// Frame for Doppler f_d in (0, 0.5]. Throws InvalidConfig otherwise.
FadingFrame make_frame(double doppler);

/// Frame of a given coherence length (>= 1 symbol); f_d = 1 / (2 T).
FadingFrame frame_from_length(double length);

/// Normalized Doppler v / (lambda * W_c).
double doppler_from_velocity(double speed_mps, double wavelength_m, double coherence_bandwidth_hz);

/// K x K grid of equally shaped complex matrices, indexed (row node, column node).
class ChannelMatrices {
 public:
  ChannelMatrices() = default;
  ChannelMatrices(int users, Eigen::Index rows, Eigen::Index cols);

  int users() const noexcept { return users_; }
  Eigen::Index rows() const noexcept { return rows_; }
  Eigen::Index cols() const noexcept { return cols_; }

  CMatrix& operator()(int a, int b) { return blocks_[index(a, b)]; }
  const CMatrix& operator()(int a, int b) const { return blocks_[index(a, b)]; }

  std::vector<CMatrix>& blocks() noexcept { return blocks_; }
  const std::vector<CMatrix>& blocks() const noexcept { return blocks_; }

  /// Side by side: [M(a,0) M(a,1) ... M(a,K-1)].
  CMatrix hconcat_row(int a) const;

  /// Stacked: [M(a,0); M(a,1); ...; M(a,K-1)].
  CMatrix vstack_row(int a) const;

  ChannelMatrices scaled(double factor) const;

 private:
  std::size_t index(int a, int b) const noexcept {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(users_) + static_cast<std::size_t>(b);
  }

  int users_ = 0;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  std::vector<CMatrix> blocks_;
};

/// One block-fading realization.
///
/// forward(i, k) is the Nr x Nt channel from transmitter k to receiver i.
/// feedback(l, i) is the Nt x Nr channel from receiver l to transmitter i.
struct ChannelSet {
  ChannelMatrices forward;
  ChannelMatrices feedback;
};

/// Exact (bitwise) equality of every entry and shape.
bool identical(const ChannelMatrices& a, const ChannelMatrices& b);
bool identical(const ChannelSet& a, const ChannelSet& b);

/// Draws i.i.d. CN(0,1) forward and feedback channels. Deterministic in (cfg, seed);
/// forward and feedback draws come from independent streams.
ChannelSet sample_channels(const NetworkConfig& cfg, std::uint64_t seed);

/// Draws only the forward channels (same stream as sample_channels).
ChannelMatrices sample_forward_channels(const NetworkConfig& cfg, std::uint64_t seed);

}  // namespace iaoh
