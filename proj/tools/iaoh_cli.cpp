// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "iaoh/errors.hpp"
#include "iaoh/experiment/config.hpp"
#include "iaoh/experiment/sweep.hpp"
#include "iaoh/experiment/validate.hpp"

namespace ex = iaoh::experiment;

namespace {

struct OverrideFlag {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr OverrideFlag kSweepFlags[] = {
    {"--kind", "sweep.kind", "snr | doppler | tframe | gamma | cluster | validate"},
    {"--from", "sweep.from", "first grid value (dB for snr and gamma)"},
    {"--to", "sweep.to", "last grid value"},
    {"--points", "sweep.points", "number of grid points"},
    {"--spacing", "sweep.spacing", "linear | log"},
    {"--users", "network.users", "K"},
    {"--tx-antennas", "network.tx_antennas", "Nt"},
    {"--rx-antennas", "network.rx_antennas", "Nr"},
    {"--streams", "network.streams", "d"},
    {"--snr-db", "link.snr_db", "per-stream SNR in dB when not swept"},
    {"--gamma-db", "link.gamma_db", "feedback-to-forward power ratio in dB when not swept"},
    {"--doppler", "link.doppler", "normalized Doppler f_d when not swept"},
    {"--trials", "run.trials", "Monte Carlo trials per grid point"},
    {"--seed", "run.seed", "root seed"},
    {"--threads", "run.threads", "worker threads, 0 = all cores"},
    {"--max-users", "run.max_users", "largest cluster in cluster sweeps"},
    {"--monte-carlo", "run.monte_carlo", "true | false"},
    {"--output", "run.output", "CSV path, '-' for stdout"},
};

int validate_command(const ex::ValidateOptions& opts) {
  const auto report = ex::run_validate(opts);
  ex::write_report(report, std::cout);
  return report.passed() ? 0 : 1;
}

int sweep_command(const ex::ExperimentSpec& spec) {
  if (spec.kind == ex::SweepKind::validate) {
    ex::ValidateOptions opts;
    opts.seed = spec.seed;
    opts.threads = spec.threads;
    return validate_command(opts);
  }
  const auto table = ex::run_sweep(spec);
  if (spec.output == "-") {
    ex::write_csv(spec, table, std::cout);
    return 0;
  }
  std::ofstream out(spec.output, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open " << spec.output << " for writing\n";
    return 2;
  }
  ex::write_csv(spec, table, out);
  out.close();
  if (!out) {
    std::cerr << "error: failed writing " << spec.output << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Training and feedback overhead experiments for MIMO interference alignment"};
  app.require_subcommand(1);
  app.set_version_flag("--version", IAOH_VERSION);

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and write CSV");
  std::optional<std::string> config;
  sweep->add_option("-c,--config", config, "INI config file")->check(CLI::ExistingFile);
  std::vector<std::pair<const OverrideFlag*, std::string>> values;
  values.reserve(std::size(kSweepFlags));
  for (const auto& flag : kSweepFlags) {
    values.emplace_back(&flag, std::string{});
  }
  for (auto& [flag, value] : values) {
    sweep->add_option(flag->flag, value, flag->help);
  }

  auto* validate = app.add_subcommand("validate", "run the property suite; exit 1 on any failure");
  ex::ValidateOptions vopts;
  validate->add_option("--seed", vopts.seed, "root seed");
  validate->add_option("--threads", vopts.threads, "worker threads, 0 = all cores");
  validate->add_option("--ia-draws", vopts.ia_draws, "channel draws for the alignment check")->check(CLI::PositiveNumber);
  validate->add_option("--gain-trials", vopts.gain_trials, "draws for the direct-gain statistics")
      ->check(CLI::PositiveNumber);
  validate->add_option("--csi-trials", vopts.csi_trials, "draws for the estimation checks")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      return validate_command(vopts);
    }
    ex::Overrides overrides;
    for (const auto& [flag, value] : values) {
      if (sweep->count(flag->flag) > 0) {
        overrides[flag->key] = value;
      }
    }
    return sweep_command(ex::load_spec(config, overrides));
  } catch (const iaoh::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
