// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include "iaoh/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iaoh/errors.hpp"
#include "iaoh/rng.hpp"

namespace iaoh {

void NetworkConfig::validate() const {
  if (users < 2) {
    throw InvalidConfig("network needs at least two users, got " + std::to_string(users));
  }
  if (tx_antennas < 1 || rx_antennas < 1) {
    throw InvalidConfig("antenna counts must be positive");
  }
  if (streams < 1 || streams > std::min(tx_antennas, rx_antennas)) {
    throw InvalidConfig("streams per user must lie in [1, min(Nt, Nr)], got " + std::to_string(streams));
  }
  if (users * tx_antennas < rx_antennas) {
    throw InvalidConfig("feedback estimation requires K*Nt >= Nr");
  }
}

bool NetworkConfig::ia_feasible() const noexcept {
  return streams * (users + 1) <= tx_antennas + rx_antennas;
}

LinkBudget LinkBudget::from_snr(double rho, int streams, double feedback_ratio) {
  LinkBudget b;
  b.noise_power = 1.0;
  b.power = rho * streams;
  b.feedback_ratio = feedback_ratio;
  b.validate();
  return b;
}

void LinkBudget::validate() const {
  if (!(power > 0.0) || !(feedback_ratio > 0.0) || !(noise_power > 0.0)) {
    throw InvalidConfig("link budget requires P > 0, gamma > 0 and sigma^2 > 0");
  }
  if (!std::isfinite(power) || !std::isfinite(feedback_ratio) || !std::isfinite(noise_power)) {
    throw InvalidConfig("link budget values must be finite");
  }
}

double FadingFrame::overhead_symbols() const {
  if (!overhead_fraction) {
    throw InvalidConfig("overhead fraction not set on this frame");
  }
  return *overhead_fraction * length;
}

FadingFrame make_frame(double doppler) {
  if (!(doppler > 0.0) || doppler > 0.5 || !std::isfinite(doppler)) {
    throw InvalidConfig("Doppler spread must lie in (0, 0.5] cycles/symbol");
  }
  FadingFrame f;
  f.doppler = doppler;
  f.length = 1.0 / (2.0 * doppler);
  return f;
}

FadingFrame frame_from_length(double length) {
  if (!(length >= 1.0) || !std::isfinite(length)) {
    throw InvalidConfig("frame length must be at least one symbol");
  }
  FadingFrame f;
  f.length = length;
  f.doppler = 1.0 / (2.0 * length);
  return f;
}

double doppler_from_velocity(double speed_mps, double wavelength_m, double coherence_bandwidth_hz) {
  if (!(wavelength_m > 0.0) || !(coherence_bandwidth_hz > 0.0) || speed_mps < 0.0) {
    throw InvalidConfig("velocity conversion needs positive wavelength and bandwidth");
  }
  return speed_mps / (wavelength_m * coherence_bandwidth_hz);
}

ChannelMatrices::ChannelMatrices(int users, Eigen::Index rows, Eigen::Index cols)
    : users_(users),
      rows_(rows),
      cols_(cols),
      blocks_(static_cast<std::size_t>(users) * static_cast<std::size_t>(users), CMatrix::Zero(rows, cols)) {}

CMatrix ChannelMatrices::hconcat_row(int a) const {
  CMatrix out(rows_, cols_ * users_);
  for (int b = 0; b < users_; ++b) {
    out.middleCols(b * cols_, cols_) = (*this)(a, b);
  }
  return out;
}

CMatrix ChannelMatrices::vstack_row(int a) const {
  CMatrix out(rows_ * users_, cols_);
  for (int b = 0; b < users_; ++b) {
    out.middleRows(b * rows_, rows_) = (*this)(a, b);
  }
  return out;
}

ChannelMatrices ChannelMatrices::scaled(double factor) const {
  ChannelMatrices out = *this;
  for (auto& m : out.blocks_) {
    m *= factor;
  }
  return out;
}

bool identical(const ChannelMatrices& a, const ChannelMatrices& b) {
  if (a.users() != b.users() || a.rows() != b.rows() || a.cols() != b.cols()) {
    return false;
  }
  for (std::size_t n = 0; n < a.blocks().size(); ++n) {
    const CMatrix& x = a.blocks()[n];
    const CMatrix& y = b.blocks()[n];
    for (Eigen::Index e = 0; e < x.size(); ++e) {
      if (x.data()[e] != y.data()[e]) {
        return false;
      }
    }
  }
  return true;
}

bool identical(const ChannelSet& a, const ChannelSet& b) {
  return identical(a.forward, b.forward) && identical(a.feedback, b.feedback);
}

namespace {

ChannelMatrices draw_grid(int users, Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  ChannelMatrices grid(users, rows, cols);
  Rng rng(seed);
  for (auto& m : grid.blocks()) {
    m = rng.complex_gaussian(rows, cols);
  }
  return grid;
}

}  // namespace

ChannelMatrices sample_forward_channels(const NetworkConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  return draw_grid(cfg.users, cfg.rx_antennas, cfg.tx_antennas,
                   derive_seed(seed, {to_index(Stream::forward_channels)}));
}

ChannelSet sample_channels(const NetworkConfig& cfg, std::uint64_t seed) {
  ChannelSet set;
  set.forward = sample_forward_channels(cfg, seed);
  set.feedback = draw_grid(cfg.users, cfg.tx_antennas, cfg.rx_antennas,
                           derive_seed(seed, {to_index(Stream::feedback_channels)}));
  return set;
}

}  // namespace iaoh
