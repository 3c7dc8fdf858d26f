// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iaoh/channel_model.hpp"

namespace iaoh::experiment {

enum class SweepKind { snr, doppler, tframe, gamma, cluster, validate };

std::string_view to_string(SweepKind kind) noexcept;
SweepKind parse_sweep_kind(std::string_view text);

enum class Spacing { linear, log };

/// Grid in the units the user wrote: dB for snr and gamma sweeps, cycles/symbol for
/// doppler, symbols for tframe and cluster.
struct GridSpec {
  double from = 0.0;
  double to = 40.0;
  int points = 9;
  Spacing spacing = Spacing::linear;

  std::vector<double> values() const;
  void validate() const;
};

/// A fully resolved experiment. Every physical quantity is linear scale.
struct ExperimentSpec {
  SweepKind kind = SweepKind::snr;
  GridSpec grid;
  std::vector<double> points;  ///< grid converted to linear scale

  NetworkConfig network;
  double rho = 100.0;           ///< per-stream SNR when not swept
  double feedback_ratio = 1.0;  ///< gamma when not swept
  double doppler = 5e-4;        ///< f_d when not swept

  int trials = 1000;
  std::uint64_t seed = 1;
  int threads = 0;  ///< 0 selects the hardware concurrency
  int max_users = 10;
  bool monte_carlo = true;
  std::string output = "-";

  /// Throws InvalidConfig on an empty or unordered grid, trials < 1 or a bad network.
  void validate() const;
};

/// "section.key" -> value, applied after the file so command-line values win.
using Overrides = std::map<std::string, std::string>;

/// Parses INI text (sections [sweep], [network], [link], [run]) into a resolved spec.
/// Unknown sections or keys are rejected.
ExperimentSpec parse_spec(std::string_view ini_text, const Overrides& overrides = {});

/// Reads `path` when given, otherwise starts from the defaults.
ExperimentSpec load_spec(const std::optional<std::string>& path, const Overrides& overrides = {});

/// INI text that reproduces `spec`; written into the CSV header for provenance.
std::string echo_spec(const ExperimentSpec& spec);

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

}  // namespace iaoh::experiment
