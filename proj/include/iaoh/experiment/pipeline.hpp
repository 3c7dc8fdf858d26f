// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "iaoh/channel_model.hpp"
#include "iaoh/csi_acquisition.hpp"

namespace iaoh::experiment {

/// Runs body(0), ..., body(count - 1) on `threads` workers (0 = hardware concurrency).
/// Each index is visited exactly once; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

/// How leakage enters the per-stream SINR.
enum class LeakageAccounting {
  expected,  ///< leakage power averaged over all trials and streams, as an additive Gaussian noise floor
  realized,  ///< per-trial leakage power
};

struct PipelineOptions {
  int trials = 1000;
  std::uint64_t seed = 1;
  std::uint64_t point = 0;  ///< grid index, part of every per-trial stream key
  int threads = 0;
  AnalogFeedbackOptions feedback;
  LeakageAccounting leakage = LeakageAccounting::expected;
};

struct PipelineResult {
  int trials = 0;
  double sum_rate = 0.0;        ///< mean payload sum-rate in bits/s/Hz
  double sum_rate_stderr = 0.0;
  double effective_rate = 0.0;  ///< (1 - overhead / T_frame) * sum_rate
  double effective_rate_stderr = 0.0;
  double error_variance = 0.0;  ///< mean per-entry |H - Hhat|^2
  double leakage = 0.0;         ///< mean per-stream (P/d) sum |w* Htilde f|^2 over all stream pairs
  int solver_failures = 0;      ///< trials where IA on the estimates did not converge
  int rank_failures = 0;        ///< trials that produced no usable combiner (rate counted as 0)
};

/// Full link simulation per trial: channel draw, forward training, feedback training,
/// analog feedback, IA on the transmitter estimates, and the per-stream rate with the
/// estimated direct gain as signal and the error leakage plus noise as Gaussian
/// interference. Deterministic in (seed, point, trial) regardless of the thread count.
PipelineResult simulate_effective_rate(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame,
                                       const OverheadAllocation& alloc, const PipelineOptions& opts);

}  // namespace iaoh::experiment
