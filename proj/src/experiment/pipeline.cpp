// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include "iaoh/experiment/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "iaoh/errors.hpp"
#include "iaoh/ia_core.hpp"
#include "iaoh/rng.hpp"
#include "iaoh/stats.hpp"

namespace iaoh::experiment {

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t n = 0; n < count; ++n) {
      body(n);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t n = next.fetch_add(1, std::memory_order_relaxed);
      if (n >= count) {
        return;
      }
      try {
        body(n);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) {
          error = std::current_exception();
        }
        stop = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back(worker);
  }
  pool.clear();
  if (error) {
    std::rethrow_exception(error);
  }
}

namespace {

struct TrialOutcome {
  std::vector<double> signal;    // (P/d) |w* Hhat_ii f|^2 per stream
  std::vector<double> leakage;   // (P/d) sum |w* Htilde f|^2 per stream
  double error = 0.0;
  bool solver_failed = false;
  bool rank_failed = false;
};

TrialOutcome run_trial(const NetworkConfig& cfg, const LinkBudget& budget, const OverheadAllocation& alloc,
                       const AnalogFeedbackOptions& feedback, std::uint64_t trial_seed) {
  TrialOutcome out;
  const ChannelSet channels = sample_channels(cfg, trial_seed);
  const CsiEstimate csi = acquire_csi(channels, cfg, budget, alloc, trial_seed, feedback);

  const int users = cfg.users;
  const int streams = cfg.streams;
  double error = 0.0;
  for (int i = 0; i < users; ++i) {
    for (int k = 0; k < users; ++k) {
      error += (channels.forward(i, k) - csi.estimates(i, k)).squaredNorm();
    }
  }
  out.error = error / (static_cast<double>(users) * users * cfg.rx_antennas * cfg.tx_antennas);

  SolverOptions solver;
  solver.seed = derive_seed(trial_seed, {to_index(Stream::ia_init)});
  IaSolution sol;
  try {
    sol = solve_ia(csi.estimates, cfg, solver);
  } catch (const RankDeficiency&) {
    out.rank_failed = true;
    return out;
  }
  out.solver_failed = !sol.converged;

  const double per_stream_power = budget.power / streams;
  for (int i = 0; i < users; ++i) {
    const CMatrix& w = sol.combiners[static_cast<std::size_t>(i)];
    for (int m = 0; m < streams; ++m) {
      const auto wm = w.col(m);
      double interference = 0.0;
      for (int k = 0; k < users; ++k) {
        const CMatrix error_block = channels.forward(i, k) - csi.estimates(i, k);
        const CMatrix& f = sol.precoders[static_cast<std::size_t>(k)];
        for (int l = 0; l < streams; ++l) {
          const bool own = k == i && l == m;
          // Residual misalignment on the estimates is charged together with the error term.
          const CMatrix& seen = own ? error_block : channels.forward(i, k);
          interference += std::norm(wm.dot(seen * f.col(l)));
        }
      }
      out.leakage.push_back(per_stream_power * interference);
      out.signal.push_back(per_stream_power *
                           std::norm(sol.gains[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)]));
    }
  }
  return out;
}

}  // namespace

PipelineResult simulate_effective_rate(const NetworkConfig& cfg, const LinkBudget& budget, const FadingFrame& frame,
                                       const OverheadAllocation& alloc, const PipelineOptions& opts) {
  cfg.validate();
  budget.validate();
  alloc.validate(cfg);
  if (opts.trials < 1) {
    throw InvalidConfig("pipeline needs at least one trial");
  }
  if (!cfg.ia_feasible()) {
    throw InfeasibleConfig("network configuration is not IA feasible");
  }
  const auto trials = static_cast<std::size_t>(opts.trials);
  std::vector<TrialOutcome> outcomes(trials);
  parallel_for(trials, opts.threads, [&](std::size_t t) {
    const std::uint64_t trial_seed = derive_seed(opts.seed, {opts.point, t, to_index(Stream::trial)});
    outcomes[t] = run_trial(cfg, budget, alloc, opts.feedback, trial_seed);
  });

  PipelineResult result;
  result.trials = opts.trials;
  std::size_t stream_samples = 0;
  for (const auto& o : outcomes) {
    result.error_variance += o.error;
    result.solver_failures += o.solver_failed ? 1 : 0;
    result.rank_failures += o.rank_failed ? 1 : 0;
    for (double l : o.leakage) {
      result.leakage += l;
    }
    stream_samples += o.leakage.size();
  }
  result.leakage = stream_samples > 0 ? result.leakage / static_cast<double>(stream_samples) : 0.0;

  std::vector<double> rates(trials, 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& o = outcomes[t];
    for (std::size_t s = 0; s < o.signal.size(); ++s) {
      const double floor =
          (opts.leakage == LeakageAccounting::expected ? result.leakage : o.leakage[s]) + budget.noise_power;
      rates[t] += std::log2(1.0 + o.signal[s] / floor);
    }
  }
  const auto moments = sample_moments(rates);
  result.sum_rate = moments.mean;
  result.sum_rate_stderr = trials > 1 ? std::sqrt(moments.variance / static_cast<double>(trials)) : 0.0;
  result.error_variance /= static_cast<double>(trials);
  const double payload = std::max(0.0, 1.0 - alloc.total() / frame.length);
  result.effective_rate = payload * result.sum_rate;
  result.effective_rate_stderr = payload * result.sum_rate_stderr;
  return result;
}

}  // namespace iaoh::experiment
