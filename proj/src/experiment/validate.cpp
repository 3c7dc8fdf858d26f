// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include "iaoh/experiment/validate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>

#include "iaoh/cluster_planner.hpp"
#include "iaoh/experiment/pipeline.hpp"
#include "iaoh/ia_core.hpp"
#include "iaoh/overhead_optimizer.hpp"
#include "iaoh/rate_analytics.hpp"
#include "iaoh/rng.hpp"
#include "iaoh/stats.hpp"

namespace iaoh::experiment {

namespace {

enum class Suite : std::uint64_t { ia = 1, gains, forward, feedback, csi, ablation, split };

std::uint64_t trial_seed(const ValidateOptions& opts, Suite suite, std::size_t trial, std::uint64_t variant = 0) {
  return derive_seed(opts.seed, {static_cast<std::uint64_t>(suite), variant, trial});
}

double relative_error(double value, double reference) { return std::abs(value - reference) / std::abs(reference); }

void add(ValidationReport& report, std::string name, double value, double limit, bool passed, std::string detail = {}) {
  report.checks.push_back({std::move(name), passed, value, limit, std::move(detail)});
}

void add_below(ValidationReport& report, std::string name, double value, double limit, std::string detail = {}) {
  add(report, std::move(name), value, limit, value < limit, std::move(detail));
}

NetworkConfig reference_network() { return NetworkConfig{3, 2, 2, 1}; }

void check_ia(const ValidateOptions& opts, ValidationReport& report) {
  const NetworkConfig cfg = reference_network();
  const auto draws = static_cast<std::size_t>(opts.ia_draws);
  std::vector<char> ok(draws, 0);
  parallel_for(draws, opts.threads, [&](std::size_t t) {
    const std::uint64_t seed = trial_seed(opts, Suite::ia, t);
    SolverOptions solver;
    solver.seed = derive_seed(seed, {to_index(Stream::ia_init)});
    const auto sol = solve_ia(sample_forward_channels(cfg, seed), cfg, solver);
    ok[t] = sol.leakage < 1e-9 && sol.max_residual < 1e-9 ? 1 : 0;
  });
  const double fraction = static_cast<double>(std::count(ok.begin(), ok.end(), 1)) / static_cast<double>(draws);
  add(report, "ia_alignment_rate", fraction, 0.99, fraction >= 0.99, "fraction of draws with leakage and residual < 1e-9");
}

void check_gain_statistics(const ValidateOptions& opts, ValidationReport& report) {
  const NetworkConfig cfg = reference_network();
  const auto trials = static_cast<std::size_t>(opts.gain_trials);
  const auto streams = static_cast<std::size_t>(cfg.total_streams());
  std::vector<std::complex<double>> gains(trials * streams);
  parallel_for(trials, opts.threads, [&](std::size_t t) {
    const std::uint64_t seed = trial_seed(opts, Suite::gains, t);
    SolverOptions solver;
    solver.seed = derive_seed(seed, {to_index(Stream::ia_init)});
    const auto sol = solve_ia(sample_forward_channels(cfg, seed), cfg, solver);
    std::size_t s = 0;
    for (const auto& user : sol.gains) {
      for (const auto& g : user) {
        gains[t * streams + s++] = g;
      }
    }
  });

  const auto parts = split_parts(gains);
  const auto re = sample_moments(parts.real);
  const auto im = sample_moments(parts.imag);
  add_below(report, "gain_mean_real", std::abs(re.mean), 0.01);
  add_below(report, "gain_mean_imag", std::abs(im.mean), 0.01);
  const double power = mean_power(gains);
  add_below(report, "gain_power", relative_error(power, 1.0), 0.03, "E|g|^2 relative to 1");
  add_below(report, "gain_skewness_real", std::abs(re.skewness), 0.05);
  add_below(report, "gain_skewness_imag", std::abs(im.skewness), 0.05);
  add_below(report, "gain_kurtosis_real", std::abs(re.excess_kurtosis), 0.1);
  add_below(report, "gain_kurtosis_imag", std::abs(im.excess_kurtosis), 0.1);

  std::vector<double> magnitudes(gains.size());
  for (std::size_t n = 0; n < gains.size(); ++n) {
    magnitudes[n] = std::norm(gains[n]);
  }
  for (double rho : {1.0, 10.0, 100.0}) {
    double sum = 0.0;
    for (double m : magnitudes) {
      sum += std::log2(1.0 + rho * m);
    }
    const double simulated = sum / static_cast<double>(trials);
    const double analytic = avg_sum_rate(cfg, rho);
    char name[64];
    std::snprintf(name, sizeof name, "ergodic_rate_rho_%g", rho);
    add_below(report, name, relative_error(simulated, analytic), 0.01);
  }
}

void check_derivatives(ValidationReport& report) {
  const NetworkConfig cfg = reference_network();
  for (double rho : {1.0, 10.0, 100.0}) {
    const auto d = rate_derivatives(cfg, rho);
    const double h1 = 1e-4 * rho;
    const double first = (avg_sum_rate(cfg, rho + h1) - avg_sum_rate(cfg, rho - h1)) / (2.0 * h1);
    const double h2 = 1e-3 * rho;
    const double second =
        (avg_sum_rate(cfg, rho + h2) - 2.0 * avg_sum_rate(cfg, rho) + avg_sum_rate(cfg, rho - h2)) / (h2 * h2);
    char name[64];
    std::snprintf(name, sizeof name, "rate_slope_rho_%g", rho);
    add_below(report, name, std::abs(d.first - first), 1e-6);
    std::snprintf(name, sizeof name, "rate_curvature_rho_%g", rho);
    add_below(report, name, std::abs(d.second - second), 1e-4);
  }
}

// Mean per-entry squared error of a training phase, over csi_trials draws.
double training_error(const ValidateOptions& opts, bool forward, const LinkBudget& budget, int length) {
  const NetworkConfig cfg = reference_network();
  const auto trials = static_cast<std::size_t>(opts.csi_trials);
  std::vector<double> errors(trials);
  parallel_for(trials, opts.threads, [&](std::size_t t) {
    const std::uint64_t seed = trial_seed(opts, forward ? Suite::forward : Suite::feedback, t);
    const ChannelSet ch = sample_channels(cfg, seed);
    const auto& truth = forward ? ch.forward : ch.feedback;
    const auto est = forward ? forward_training(truth, cfg, budget, length, seed)
                             : feedback_training(truth, cfg, budget, length, seed);
    double e = 0.0;
    for (int a = 0; a < cfg.users; ++a) {
      for (int b = 0; b < cfg.users; ++b) {
        e += (truth(a, b) - est.estimates(a, b)).squaredNorm();
      }
    }
    errors[t] = e / (cfg.users * cfg.users * cfg.tx_antennas * cfg.rx_antennas);
  });
  return sample_mean(errors);
}

void check_training(const ValidateOptions& opts, ValidationReport& report) {
  const NetworkConfig cfg = reference_network();
  {
    const int length = cfg.min_forward_training();
    LinkBudget budget;
    budget.power = 100.0 * cfg.tx_antennas / length;
    const double simulated = training_error(opts, true, budget, length);
    add_below(report, "forward_training_error", relative_error(simulated, 1.0 / 101.0), 0.03,
              "pilot SNR 100 per antenna");
  }
  {
    const int length = cfg.min_feedback_training();
    LinkBudget budget;
    budget.power = 50.0 * cfg.rx_antennas / length;
    const double simulated = training_error(opts, false, budget, length);
    add_below(report, "feedback_training_error", relative_error(simulated, 1.0 / 51.0), 0.03,
              "pilot SNR 50 per antenna");
  }
}

struct FeedbackStats {
  double error = 0.0;                        // mean per-entry squared error
  std::vector<double> block_error;           // per (i, k)
  double energy = 0.0;                       // mean trace(X X*) / (tau_f P_f)
  double max_off_diagonal_ratio = 0.0;       // |C_01| / mean diag of per-column covariance
};

FeedbackStats simulate_feedback(const ValidateOptions& opts, const LinkBudget& budget, const OverheadAllocation& alloc,
                                const AnalogFeedbackOptions& feedback, std::uint64_t variant, Suite suite) {
  const NetworkConfig cfg = reference_network();
  const auto trials = static_cast<std::size_t>(opts.csi_trials);
  const auto blocks = static_cast<std::size_t>(cfg.users * cfg.users);
  struct Sample {
    std::vector<double> block;
    double energy = 0.0;
    Eigen::Matrix2cd covariance = Eigen::Matrix2cd::Zero();
  };
  std::vector<Sample> samples(trials);
  parallel_for(trials, opts.threads, [&](std::size_t t) {
    const std::uint64_t seed = trial_seed(opts, suite, t, variant);
    const ChannelSet ch = sample_channels(cfg, seed);
    const auto est = acquire_csi(ch, cfg, budget, alloc, seed, feedback);
    Sample s;
    s.block.resize(blocks);
    for (int i = 0; i < cfg.users; ++i) {
      for (int k = 0; k < cfg.users; ++k) {
        const CMatrix err = ch.forward(i, k) - est.estimates(i, k);
        s.block[static_cast<std::size_t>(i * cfg.users + k)] = err.squaredNorm() / (cfg.rx_antennas * cfg.tx_antennas);
        s.covariance += err * err.adjoint();
      }
    }
    for (double e : est.feedback_energy) {
      s.energy += e / cfg.users;
    }
    samples[t] = std::move(s);
  });

  FeedbackStats out;
  out.block_error.assign(blocks, 0.0);
  Eigen::Matrix2cd covariance = Eigen::Matrix2cd::Zero();
  for (const auto& s : samples) {
    for (std::size_t b = 0; b < blocks; ++b) {
      out.block_error[b] += s.block[b] / static_cast<double>(trials);
    }
    out.energy += s.energy / static_cast<double>(trials);
    covariance += s.covariance;
  }
  for (double b : out.block_error) {
    out.error += b / static_cast<double>(blocks);
  }
  const double diagonal = 0.5 * (covariance(0, 0).real() + covariance(1, 1).real());
  out.max_off_diagonal_ratio = std::abs(covariance(0, 1)) / diagonal;
  return out;
}

void check_feedback(const ValidateOptions& opts, ValidationReport& report) {
  const NetworkConfig cfg = reference_network();
  const LinkBudget budget = LinkBudget::from_snr(100.0, cfg.streams);
  const auto design = alpha_star_numeric(cfg, budget, make_frame(5e-4));
  const OverheadAllocation alloc = design.allocation;
  char detail[128];
  std::snprintf(detail, sizeof detail, "rho 100, allocation (%d, %d, %d)", alloc.forward_training,
                alloc.feedback_training, alloc.feedback);

  AnalogFeedbackOptions zf;
  zf.estimator = FeedbackEstimator::zero_forcing;
  AnalogFeedbackOptions mmse;
  const auto zf_stats = simulate_feedback(opts, budget, alloc, zf, 0, Suite::csi);
  const auto mmse_stats = simulate_feedback(opts, budget, alloc, mmse, 0, Suite::csi);

  const double model = opts.closed_form(cfg, budget, alloc);
  add_below(report, "zf_error_vs_closed_form", relative_error(zf_stats.error, model), 0.05, detail);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < zf_stats.block_error.size(); ++b) {
    worst = std::max(worst, mmse_stats.block_error[b] - zf_stats.block_error[b]);
  }
  add(report, "mmse_not_worse_than_zf", worst, 0.0, worst <= 0.0, "largest per-block MMSE minus ZF error");
  add(report, "feedback_energy", zf_stats.energy, 0.01, std::abs(zf_stats.energy - 1.0) <= 0.01,
      "mean trace(X X*) / (tau_f P_f)");
  add_below(report, "error_covariance_off_diagonal", zf_stats.max_off_diagonal_ratio, 0.05);

  const auto terms = error_terms(cfg, budget, alloc);
  const std::array<std::pair<const char*, AcquisitionNoise>, 3> cases{{
      {"ablation_forward_training", {true, false, false}},
      {"ablation_feedback_training", {false, true, false}},
      {"ablation_feedback_noise", {false, false, true}},
  }};
  const std::array<double, 3> expected{terms.forward_training, terms.feedback_training, terms.feedback};
  for (std::size_t c = 0; c < cases.size(); ++c) {
    AnalogFeedbackOptions isolated = zf;
    isolated.noise = cases[c].second;
    const auto stats = simulate_feedback(opts, budget, alloc, isolated, c + 1, Suite::ablation);
    add_below(report, cases[c].first, relative_error(stats.error, expected[c]), 0.05);
  }
}

void check_split(const ValidateOptions& opts, ValidationReport& report) {
  const NetworkConfig cfg = reference_network();
  LinkBudget budget;
  budget.power = 10.0;
  const auto fractions = split_fractions(cfg, budget);
  const std::array<double, 3> expected{0.3411, 0.2412, 0.4177};
  double worst = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    worst = std::max(worst, std::abs(fractions[j] - expected[j]));
  }
  add(report, "split_fractions", worst, 1e-4, worst <= 1e-4);

  const double symbols = 100.0;
  const auto split = optimal_split(cfg, budget, symbols);
  const int total = split.allocation.total();
  std::mt19937_64 engine(derive_seed(opts.seed, {static_cast<std::uint64_t>(Suite::split)}));
  const int spare = total - cfg.min_overhead();
  std::uniform_int_distribution<int> pick(0, spare);
  int beaten = 0;
  for (int n = 0; n < opts.split_samples; ++n) {
    int a = pick(engine);
    int b = pick(engine);
    if (a > b) {
      std::swap(a, b);
    }
    const OverheadAllocation candidate{cfg.min_forward_training() + a, cfg.min_feedback_training() + (b - a),
                                       cfg.min_feedback() + (spare - b)};
    if (error_variance(cfg, budget, candidate) < split.error_variance_integer) {
      ++beaten;
    }
  }
  add(report, "split_beats_random_allocations", beaten, 0.0, beaten == 0, "random allocations with a lower error");
  add(report, "split_integer_above_continuous", split.error_variance_integer - split.error_variance_continuous, 0.0,
      split.error_variance_integer >= split.error_variance_continuous);
}

void check_overhead(ValidationReport& report) {
  const NetworkConfig cfg = reference_network();
  const LinkBudget budget = LinkBudget::from_snr(10.0, cfg.streams);
  const FadingFrame frame = make_frame(1e-4);
  const double exact = effective_rate(cfg, budget, frame, 0.05);
  const double series = expansion_effective_rate(cfg, budget, frame, 0.05);
  add_below(report, "expansion_vs_exact_rate", relative_error(series, exact), 0.02, "f_d = 1e-4, alpha = 0.05");

  std::vector<double> x;
  std::vector<double> y;
  for (double fd : {1e-6, 1e-5, 1e-4}) {
    const auto design = alpha_star_expansion(cfg, budget, make_frame(fd));
    x.push_back(std::log(fd));
    y.push_back(std::log(design.pre_clamp_alpha));
  }
  const double slope = (y.back() - y.front()) / (x.back() - x.front());
  add_below(report, "alpha_scaling_slope", std::abs(slope - 0.5), 0.05, "log alpha* vs log f_d");

  const bool below = admission_rule(3, 1.0 / 300.0 * (1.0 - 1e-9));
  const bool above = admission_rule(3, 1.0 / 300.0);
  add(report, "admission_threshold_k3", admission_polynomial(3), 300.0, below && !above);
}

}  // namespace

bool ValidationReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ValidationReport run_validate(const ValidateOptions& opts) {
  ValidationReport report;
  check_ia(opts, report);
  check_gain_statistics(opts, report);
  check_derivatives(report);
  check_training(opts, report);
  check_feedback(opts, report);
  check_split(opts, report);
  check_overhead(report);
  return report;
}

void write_report(const ValidationReport& report, std::ostream& out) {
  std::size_t failed = 0;
  for (const auto& c : report.checks) {
    char line[256];
    std::snprintf(line, sizeof line, "%s %-34s value=%.6g limit=%.6g", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                  c.value, c.limit);
    out << line;
    if (!c.detail.empty()) {
      out << "  (" << c.detail << ")";
    }
    out << "\n";
    failed += c.passed ? 0 : 1;
  }
  out << (failed == 0 ? "all " : "") << report.checks.size() - failed << "/" << report.checks.size()
      << " checks passed\n";
}

}  // namespace iaoh::experiment
