// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include "iaoh/experiment/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "iaoh/cluster_planner.hpp"
#include "iaoh/errors.hpp"
#include "iaoh/experiment/pipeline.hpp"
#include "iaoh/overhead_optimizer.hpp"
#include "iaoh/rate_analytics.hpp"

#ifndef IAOH_VERSION
#define IAOH_VERSION "unknown"
#endif

namespace iaoh::experiment {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Operating {
  double rho = 0.0;
  double feedback_ratio = 0.0;
  FadingFrame frame;
};

Operating operating_point(const ExperimentSpec& spec, double x) {
  Operating op{spec.rho, spec.feedback_ratio, make_frame(spec.doppler)};
  switch (spec.kind) {
    case SweepKind::snr:
      op.rho = x;
      break;
    case SweepKind::gamma:
      op.feedback_ratio = x;
      break;
    case SweepKind::doppler:
      op.frame = make_frame(x);
      break;
    case SweepKind::tframe:
    case SweepKind::cluster:
      op.frame = frame_from_length(x);
      break;
    case SweepKind::validate:
      throw InvalidConfig("validate is not a sweep kind");
  }
  return op;
}

std::string grid_column(SweepKind kind) {
  switch (kind) {
    case SweepKind::snr:
      return "snr_db[input]";
    case SweepKind::gamma:
      return "gamma_db[input]";
    case SweepKind::doppler:
      return "doppler[input]";
    default:
      return "tframe[input]";
  }
}

double grid_display(SweepKind kind, double x) {
  return kind == SweepKind::snr || kind == SweepKind::gamma ? linear_to_db(x) : x;
}

ResultTable rate_sweep(const ExperimentSpec& spec) {
  ResultTable table;
  table.header = {grid_column(spec.kind),
                  "rho[input]",
                  "gamma[input]",
                  "doppler[input]",
                  "tframe[input]",
                  "genie_rate[ergodic_rate]",
                  "alpha_min[minimum_overhead]",
                  "alpha_numeric[numeric_alpha]",
                  "eff_rate_numeric[numeric_alpha]",
                  "sigma2_star[optimal_split]",
                  "tau_t[integer_split]",
                  "tau_p[integer_split]",
                  "tau_f[integer_split]",
                  "alpha_expansion[expansion_alpha]",
                  "alpha_expansion_clamped[expansion_alpha]",
                  "eff_rate_expansion[expansion_alpha]",
                  "eff_rate_at_expansion_alpha[exact_objective]"};
  if (spec.monte_carlo) {
    table.header.insert(table.header.end(), {"eff_rate_mc[monte_carlo]", "eff_rate_mc_stderr[monte_carlo]",
                                             "sigma2_mc[monte_carlo]", "ia_failures_mc[monte_carlo]"});
  }

  for (std::size_t p = 0; p < spec.points.size(); ++p) {
    const double x = spec.points[p];
    const Operating op = operating_point(spec, x);
    const LinkBudget budget = LinkBudget::from_snr(op.rho, spec.network.streams, op.feedback_ratio);
    const NetworkConfig& cfg = spec.network;

    std::vector<double> row{grid_display(spec.kind, x), op.rho,     op.feedback_ratio, op.frame.doppler,
                            op.frame.length,           avg_sum_rate(cfg, op.rho)};
    if (op.frame.length < cfg.min_overhead()) {
      row.resize(table.header.size(), kNaN);
      table.rows.push_back(std::move(row));
      continue;
    }
    const auto numeric = alpha_star_numeric(cfg, budget, op.frame);
    const auto expansion = alpha_star_expansion(cfg, budget, op.frame);
    row.insert(row.end(), {alpha_min(cfg, op.frame.length), numeric.alpha, numeric.rate, numeric.error_variance,
                           static_cast<double>(numeric.allocation.forward_training),
                           static_cast<double>(numeric.allocation.feedback_training),
                           static_cast<double>(numeric.allocation.feedback), expansion.alpha,
                           expansion.clamped ? 1.0 : 0.0, expansion.rate, expansion.rate_at_alpha});
    if (spec.monte_carlo) {
      if (cfg.ia_feasible()) {
        PipelineOptions opts;
        opts.trials = spec.trials;
        opts.seed = spec.seed;
        opts.point = p;
        opts.threads = spec.threads;
        const auto mc = simulate_effective_rate(cfg, budget, op.frame, numeric.allocation, opts);
        row.insert(row.end(), {mc.effective_rate, mc.effective_rate_stderr,
                               mc.error_variance, static_cast<double>(mc.solver_failures + mc.rank_failures)});
      } else {
        row.insert(row.end(), {kNaN, kNaN, kNaN, kNaN});
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable cluster_sweep(const ExperimentSpec& spec) {
  ResultTable table;
  table.header = {"tframe[input]",
                  "doppler[input]",
                  "rho[input]",
                  "k_star_exhaustive[exhaustive_search]",
                  "k_star_rule[admission_rule]",
                  "rate_exhaustive[exhaustive_search]",
                  "rate_rule[admission_rule]",
                  "rate_loss_rule[admission_rule]"};
  for (int k = 2; k <= spec.max_users; ++k) {
    table.header.push_back("rate_k" + std::to_string(k) + "[numeric_alpha]");
  }
  table.rows.resize(spec.points.size());
  parallel_for(spec.points.size(), spec.threads, [&](std::size_t p) {
    const Operating op = operating_point(spec, spec.points[p]);
    const LinkBudget budget = LinkBudget::from_snr(op.rho, 1, op.feedback_ratio);
    const auto design = cluster_size_exhaustive(budget, op.frame.doppler, spec.max_users);
    const int rule = cluster_size_rule(op.frame.doppler, spec.max_users);
    const double best = design.per_k[static_cast<std::size_t>(design.k_star - 2)].rate;
    const double by_rule = design.per_k[static_cast<std::size_t>(rule - 2)].rate;
    std::vector<double> row{op.frame.length,
                            op.frame.doppler,
                            op.rho,
                            static_cast<double>(design.k_star),
                            static_cast<double>(rule),
                            best,
                            by_rule,
                            best > 0.0 ? (best - by_rule) / best : 0.0};
    for (const auto& point : design.per_k) {
      row.push_back(point.rate);
    }
    table.rows[p] = std::move(row);
  });
  return table;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace

std::size_t ResultTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].substr(0, header[c].find('[')) == name) {
      return c;
    }
  }
  throw InvalidConfig("no column named '" + name + "'");
}

ResultTable run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case SweepKind::cluster:
      return cluster_sweep(spec);
    case SweepKind::validate:
      throw InvalidConfig("the validate kind is run through run_validate");
    default:
      return rate_sweep(spec);
  }
}

void write_csv(const ExperimentSpec& spec, const ResultTable& table, std::ostream& out) {
  out << "# iaoverhead " << IAOH_VERSION << "\n";
  out << "# seed = " << spec.seed << "\n";
  std::istringstream echo(echo_spec(spec));
  for (std::string line; std::getline(echo, line);) {
    out << "# " << line << "\n";
  }
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    out << (c ? "," : "") << table.header[c];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << format_number(row[c]);
    }
    out << "\n";
  }
}

}  // namespace iaoh::experiment
