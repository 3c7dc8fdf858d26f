// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "iaoh/channel_model.hpp"
#include "iaoh/csi_acquisition.hpp"

namespace iaoh::experiment {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;  ///< measured statistic
  double limit = 0.0;  ///< tolerance it is compared against
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool passed() const noexcept;
};

/// Closed-form CSI error model checked against simulation.
using ErrorVarianceModel =
    std::function<double(const NetworkConfig&, const LinkBudget&, const OverheadAllocation&)>;

struct ValidateOptions {
  std::uint64_t seed = 1;
  int threads = 0;
  int ia_draws = 1000;
  int gain_trials = 100000;
  int csi_trials = 10000;
  int split_samples = 1000;
  ErrorVarianceModel closed_form = [](const NetworkConfig& cfg, const LinkBudget& budget,
                                      const OverheadAllocation& alloc) { return error_variance(cfg, budget, alloc); };
};

/// Runs the Monte Carlo and oracle property suite on the reference network
/// (K = 3, Nt = Nr = 2, d = 1, gamma = 1).
ValidationReport run_validate(const ValidateOptions& opts = {});

/// One "PASS name value limit detail" line per check followed by a summary line.
void write_report(const ValidationReport& report, std::ostream& out);

}  // namespace iaoh::experiment
