// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "iaoh/experiment/config.hpp"

namespace iaoh::experiment {

/// Column headers carry the producing quantity in brackets, e.g. "alpha_numeric[numeric_alpha]".
struct ResultTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of the column whose name (before the bracket) is `name`; throws if absent.
  std::size_t column(const std::string& name) const;
};

/// One row per grid point, in grid order. Throws InvalidConfig for the validate kind.
ResultTable run_sweep(const ExperimentSpec& spec);

/// CSV with a leading '#' block (version, seed, echoed spec) and %.12g numbers.
void write_csv(const ExperimentSpec& spec, const ResultTable& table, std::ostream& out);

}  // namespace iaoh::experiment
