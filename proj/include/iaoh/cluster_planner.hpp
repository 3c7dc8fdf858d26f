// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include <vector>

#include "iaoh/channel_model.hpp"

namespace iaoh {

/// Single-stream K-user cluster with Nt = ceil((K+1)/2) and Nr = K + 1 - Nt.
NetworkConfig single_stream_cluster(int users);

/// 4K^3 + 15K^2 + 17K + 6.
double admission_polynomial(int users);

/// True when a K-user cluster should admit one more user at Doppler f_d.
bool admission_rule(int users, double doppler);

/// Smallest K in [2, max_users] for which admission_rule fails; max_users if none.
int cluster_size_rule(double doppler, int max_users = 10);

struct ClusterPoint {
  int users = 0;
  int tx_antennas = 0;
  int rx_antennas = 0;
  double alpha = 0.0;  ///< numerically optimal overhead fraction, 0 when infeasible
  double rate = 0.0;   ///< optimal effective sum-rate, 0 when the frame cannot hold the overhead
};

enum class ClusterSelector { exhaustive, admission_rule };

struct ClusterDesign {
  int k_star = 0;
  std::vector<ClusterPoint> per_k;
  ClusterSelector rule = ClusterSelector::exhaustive;
};

/// Optimal effective sum-rate of a single-stream K-user cluster. The budget is applied
/// per user, so rho = P / sigma^2.
ClusterPoint evaluate_cluster(int users, const LinkBudget& budget, const FadingFrame& frame);

/// Argmax over K in [2, max_users] of evaluate_cluster; ties go to the smaller K.
ClusterDesign cluster_size_exhaustive(const LinkBudget& budget, double doppler, int max_users = 10);

/// Rule-based size with per-K rates filled in for comparison.
ClusterDesign cluster_size_by_rule(const LinkBudget& budget, double doppler, int max_users = 10);

}  // namespace iaoh
