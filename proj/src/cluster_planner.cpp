// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include "iaoh/cluster_planner.hpp"

#include <cmath>
#include <string>

#include "iaoh/errors.hpp"
#include "iaoh/overhead_optimizer.hpp"

namespace iaoh {

namespace {

void require_users(int users) {
  if (users < 2) {
    throw InvalidConfig("cluster needs at least two users, got " + std::to_string(users));
  }
}

std::vector<ClusterPoint> evaluate_range(const LinkBudget& budget, double doppler, int max_users) {
  require_users(max_users);
  const FadingFrame frame = make_frame(doppler);
  std::vector<ClusterPoint> points;
  for (int k = 2; k <= max_users; ++k) {
    points.push_back(evaluate_cluster(k, budget, frame));
  }
  return points;
}

}  // namespace

NetworkConfig single_stream_cluster(int users) {
  require_users(users);
  NetworkConfig cfg;
  cfg.users = users;
  cfg.tx_antennas = (users + 2) / 2;
  cfg.rx_antennas = users + 1 - cfg.tx_antennas;
  cfg.streams = 1;
  return cfg;
}

double admission_polynomial(int users) {
  const double k = users;
  return 4.0 * k * k * k + 15.0 * k * k + 17.0 * k + 6.0;
}

bool admission_rule(int users, double doppler) {
  require_users(users);
  if (!(doppler > 0.0)) {
    throw InvalidConfig("admission rule requires a positive Doppler spread");
  }
  return admission_polynomial(users) < 1.0 / doppler;
}

int cluster_size_rule(double doppler, int max_users) {
  require_users(max_users);
  for (int k = 2; k <= max_users; ++k) {
    if (!admission_rule(k, doppler)) {
      return k;
    }
  }
  return max_users;
}

ClusterPoint evaluate_cluster(int users, const LinkBudget& budget, const FadingFrame& frame) {
  const NetworkConfig cfg = single_stream_cluster(users);
  ClusterPoint point{users, cfg.tx_antennas, cfg.rx_antennas, 0.0, 0.0};
  if (frame.length < cfg.min_overhead()) {
    return point;
  }
  const auto design = alpha_star_numeric(cfg, budget, frame);
  point.alpha = design.alpha;
  point.rate = design.rate;
  return point;
}

ClusterDesign cluster_size_exhaustive(const LinkBudget& budget, double doppler, int max_users) {
  ClusterDesign design;
  design.rule = ClusterSelector::exhaustive;
  design.per_k = evaluate_range(budget, doppler, max_users);
  double best = -1.0;
  for (const auto& p : design.per_k) {
    if (p.rate > best) {
      best = p.rate;
      design.k_star = p.users;
    }
  }
  return design;
}

ClusterDesign cluster_size_by_rule(const LinkBudget& budget, double doppler, int max_users) {
  ClusterDesign design;
  design.rule = ClusterSelector::admission_rule;
  design.per_k = evaluate_range(budget, doppler, max_users);
  design.k_star = cluster_size_rule(doppler, max_users);
  return design;
}

}  // namespace iaoh
