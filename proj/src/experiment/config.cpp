// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include "iaoh/experiment/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "iaoh/errors.hpp"

namespace iaoh::experiment {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"sweep", {"kind", "from", "to", "points", "spacing"}},
      {"network", {"users", "tx_antennas", "rx_antennas", "streams"}},
      {"link", {"snr_db", "gamma_db", "doppler"}},
      {"run", {"trials", "seed", "threads", "max_users", "monte_carlo", "output"}},
  };
  return keys;
}

void check_keys(const pt::ptree& tree) {
  const auto& keys = known_keys();
  for (const auto& [section, body] : tree) {
    const auto it = keys.find(section);
    if (it == keys.end()) {
      throw InvalidConfig("unknown config section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) {
        throw InvalidConfig("unknown key '" + key + "' in section [" + section + "]");
      }
    }
  }
}

template <typename T>
T read(const pt::ptree& tree, const std::string& path, T fallback) {
  const auto node = tree.get_optional<std::string>(path);
  if (!node) {
    return fallback;
  }
  std::istringstream in(*node);
  T value{};
  in >> value;
  if (in.fail() || !(in >> std::ws).eof()) {
    throw InvalidConfig("cannot parse '" + *node + "' for " + path);
  }
  return value;
}

bool read_bool(const pt::ptree& tree, const std::string& path, bool fallback) {
  const auto node = tree.get_optional<std::string>(path);
  if (!node) {
    return fallback;
  }
  if (*node == "true" || *node == "1" || *node == "yes" || *node == "on") {
    return true;
  }
  if (*node == "false" || *node == "0" || *node == "no" || *node == "off") {
    return false;
  }
  throw InvalidConfig("cannot parse '" + *node + "' as a boolean for " + path);
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace

std::string_view to_string(SweepKind kind) noexcept {
  switch (kind) {
    case SweepKind::snr:
      return "snr";
    case SweepKind::doppler:
      return "doppler";
    case SweepKind::tframe:
      return "tframe";
    case SweepKind::gamma:
      return "gamma";
    case SweepKind::cluster:
      return "cluster";
    case SweepKind::validate:
      return "validate";
  }
  return "unknown";
}

SweepKind parse_sweep_kind(std::string_view text) {
  for (auto kind : {SweepKind::snr, SweepKind::doppler, SweepKind::tframe, SweepKind::gamma, SweepKind::cluster,
                    SweepKind::validate}) {
    if (text == to_string(kind)) {
      return kind;
    }
  }
  throw InvalidConfig("unknown sweep kind '" + std::string(text) + "'");
}

std::vector<double> GridSpec::values() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(points));
  if (points == 1) {
    out[0] = from;
    return out;
  }
  for (int n = 0; n < points; ++n) {
    const double t = static_cast<double>(n) / (points - 1);
    out[static_cast<std::size_t>(n)] =
        spacing == Spacing::linear ? from + (to - from) * t : std::exp(std::log(from) + (std::log(to) - std::log(from)) * t);
  }
  out.back() = to;
  return out;
}

void GridSpec::validate() const {
  if (points < 1) {
    throw InvalidConfig("grid needs at least one point");
  }
  if (!std::isfinite(from) || !std::isfinite(to) || (points > 1 && !(to > from))) {
    throw InvalidConfig("grid bounds must be finite and increasing");
  }
  if (spacing == Spacing::log && !(from > 0.0)) {
    throw InvalidConfig("log-spaced grid needs positive bounds");
  }
}

void ExperimentSpec::validate() const {
  network.validate();
  grid.validate();
  if (kind != SweepKind::validate) {
    if (points.empty()) {
      throw InvalidConfig("sweep grid is empty");
    }
    for (std::size_t n = 1; n < points.size(); ++n) {
      if (!(points[n] > points[n - 1])) {
        throw InvalidConfig("sweep grid must be strictly increasing");
      }
    }
  }
  if (trials < 1) {
    throw InvalidConfig("trial count must be at least 1");
  }
  if (threads < 0) {
    throw InvalidConfig("thread count must be non-negative");
  }
  if (max_users < 2) {
    throw InvalidConfig("max_users must be at least 2");
  }
  if (!(rho > 0.0) || !(feedback_ratio > 0.0)) {
    throw InvalidConfig("SNR and feedback ratio must be positive");
  }
  if (!(doppler > 0.0) || doppler > 0.5) {
    throw InvalidConfig("Doppler must lie in (0, 0.5]");
  }
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

ExperimentSpec parse_spec(std::string_view ini_text, const Overrides& overrides) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(ini_text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidConfig(std::string("config parse error: ") + e.what());
  }
  for (const auto& [key, value] : overrides) {
    tree.put(key, value);
  }
  check_keys(tree);

  ExperimentSpec spec;
  spec.kind = parse_sweep_kind(read<std::string>(tree, "sweep.kind", std::string(to_string(spec.kind))));
  spec.grid.from = read(tree, "sweep.from", spec.grid.from);
  spec.grid.to = read(tree, "sweep.to", spec.grid.to);
  spec.grid.points = read(tree, "sweep.points", spec.grid.points);
  const auto spacing = read<std::string>(tree, "sweep.spacing", "linear");
  if (spacing == "linear") {
    spec.grid.spacing = Spacing::linear;
  } else if (spacing == "log") {
    spec.grid.spacing = Spacing::log;
  } else {
    throw InvalidConfig("grid spacing must be 'linear' or 'log'");
  }

  spec.network.users = read(tree, "network.users", spec.network.users);
  spec.network.tx_antennas = read(tree, "network.tx_antennas", spec.network.tx_antennas);
  spec.network.rx_antennas = read(tree, "network.rx_antennas", spec.network.rx_antennas);
  spec.network.streams = read(tree, "network.streams", spec.network.streams);

  spec.rho = db_to_linear(read(tree, "link.snr_db", linear_to_db(spec.rho)));
  spec.feedback_ratio = db_to_linear(read(tree, "link.gamma_db", 0.0));
  spec.doppler = read(tree, "link.doppler", spec.doppler);

  spec.trials = read(tree, "run.trials", spec.trials);
  spec.seed = read<std::uint64_t>(tree, "run.seed", spec.seed);
  spec.threads = read(tree, "run.threads", spec.threads);
  spec.max_users = read(tree, "run.max_users", spec.max_users);
  spec.monte_carlo = read_bool(tree, "run.monte_carlo", spec.monte_carlo);
  spec.output = read<std::string>(tree, "run.output", spec.output);

  if (spec.kind != SweepKind::validate) {
    spec.points = spec.grid.values();
    if (spec.kind == SweepKind::snr || spec.kind == SweepKind::gamma) {
      for (double& p : spec.points) {
        p = db_to_linear(p);
      }
    }
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_spec(const std::optional<std::string>& path, const Overrides& overrides) {
  if (!path) {
    return parse_spec("", overrides);
  }
  std::ifstream in(*path);
  if (!in) {
    throw InvalidConfig("cannot open config file '" + *path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_spec(text.str(), overrides);
}

std::string echo_spec(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "[sweep]\n"
      << "kind = " << to_string(spec.kind) << "\n"
      << "from = " << format_number(spec.grid.from) << "\n"
      << "to = " << format_number(spec.grid.to) << "\n"
      << "points = " << spec.grid.points << "\n"
      << "spacing = " << (spec.grid.spacing == Spacing::linear ? "linear" : "log") << "\n"
      << "[network]\n"
      << "users = " << spec.network.users << "\n"
      << "tx_antennas = " << spec.network.tx_antennas << "\n"
      << "rx_antennas = " << spec.network.rx_antennas << "\n"
      << "streams = " << spec.network.streams << "\n"
      << "[link]\n"
      << "snr_db = " << format_number(linear_to_db(spec.rho)) << "\n"
      << "gamma_db = " << format_number(linear_to_db(spec.feedback_ratio)) << "\n"
      << "doppler = " << format_number(spec.doppler) << "\n"
      << "[run]\n"
      << "trials = " << spec.trials << "\n"
      << "seed = " << spec.seed << "\n"
      << "max_users = " << spec.max_users << "\n"
      << "monte_carlo = " << (spec.monte_carlo ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace iaoh::experiment
