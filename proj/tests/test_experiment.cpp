// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <doctest.h>

#include "iaoh/csi_acquisition.hpp"
#include "iaoh/errors.hpp"
#include "iaoh/experiment/config.hpp"
#include "iaoh/experiment/pipeline.hpp"
#include "iaoh/experiment/sweep.hpp"
#include "iaoh/experiment/validate.hpp"
#include "iaoh/overhead_optimizer.hpp"

using namespace iaoh;
using namespace iaoh::experiment;

namespace {

std::string csv(const ExperimentSpec& spec) {
  std::ostringstream out;
  write_csv(spec, run_sweep(spec), out);
  return out.str();
}

}  // namespace

TEST_CASE("decibel conversion") {
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(20.0) == doctest::Approx(100.0));
  CHECK(linear_to_db(1000.0) == doctest::Approx(30.0));
  CHECK(linear_to_db(db_to_linear(-7.5)) == doctest::Approx(-7.5));
}

TEST_CASE("grids") {
  GridSpec lin{0.0, 40.0, 5, Spacing::linear};
  const auto v = lin.values();
  REQUIRE(v.size() == 5);
  CHECK(v[1] == doctest::Approx(10.0));
  CHECK(v.back() == 40.0);
  GridSpec lg{1e2, 1e6, 5, Spacing::log};
  const auto w = lg.values();
  CHECK(w[1] == doctest::Approx(1e3));
  CHECK(w[4] == doctest::Approx(1e6));
  CHECK(GridSpec{3.0, 3.0, 1, Spacing::linear}.values() == std::vector<double>{3.0});
  CHECK_THROWS_AS((GridSpec{0.0, 1.0, 0, Spacing::linear}.validate()), InvalidConfig);
  CHECK_THROWS_AS((GridSpec{2.0, 1.0, 3, Spacing::linear}.validate()), InvalidConfig);
  CHECK_THROWS_AS((GridSpec{0.0, 1.0, 3, Spacing::log}.validate()), InvalidConfig);
}

TEST_CASE("config parsing") {
  const std::string text =
      "[sweep]\nkind = snr\nfrom = 10\nto = 30\npoints = 3\n"
      "[network]\nusers = 3\ntx_antennas = 2\nrx_antennas = 2\nstreams = 1\n"
      "[link]\ngamma_db = -3\ndoppler = 2.5e-3\n"
      "[run]\ntrials = 40\nseed = 9\n";
  const auto spec = parse_spec(text);
  CHECK(spec.kind == SweepKind::snr);
  REQUIRE(spec.points.size() == 3);
  CHECK(spec.points[0] == doctest::Approx(10.0));
  CHECK(spec.points[2] == doctest::Approx(1000.0));
  CHECK(spec.feedback_ratio == doctest::Approx(std::pow(10.0, -0.3)));
  CHECK(spec.doppler == 2.5e-3);
  CHECK(spec.trials == 40);
  CHECK(spec.seed == 9);

  const auto over = parse_spec(text, {{"run.seed", "17"}, {"sweep.points", "2"}, {"network.users", "4"}});
  CHECK(over.seed == 17);
  CHECK(over.points.size() == 2);
  CHECK(over.network.users == 4);

  const auto tf = parse_spec("[sweep]\nkind = tframe\nfrom = 100\nto = 10000\npoints = 3\nspacing = log\n");
  CHECK(tf.points[1] == doctest::Approx(1000.0));

  const auto defaults = parse_spec("");
  CHECK(defaults.kind == SweepKind::snr);
  CHECK(defaults.rho == doctest::Approx(100.0));
  CHECK(defaults.network == NetworkConfig{});

  CHECK_THROWS_AS(parse_spec("[sweep]\nkindd = snr\n"), InvalidConfig);
  CHECK_THROWS_AS(parse_spec("[extra]\nx = 1\n"), InvalidConfig);
  CHECK_THROWS_AS(parse_spec("[sweep]\nkind = bogus\n"), InvalidConfig);
  CHECK_THROWS_AS(parse_spec("[run]\ntrials = 0\n"), InvalidConfig);
  CHECK_THROWS_AS(parse_spec("[run]\ntrials = many\n"), InvalidConfig);
  CHECK_THROWS_AS(parse_spec("[sweep]\nspacing = cubic\n"), InvalidConfig);
  CHECK_THROWS_AS(parse_spec("", {{"run.bogus", "1"}}), InvalidConfig);
  CHECK_THROWS_AS(load_spec(std::string("/nonexistent/spec.ini")), InvalidConfig);

  for (auto kind : {SweepKind::snr, SweepKind::doppler, SweepKind::tframe, SweepKind::gamma, SweepKind::cluster,
                    SweepKind::validate}) {
    CHECK(parse_sweep_kind(to_string(kind)) == kind);
  }
}

TEST_CASE("spec echo ignores the execution settings") {
  auto a = parse_spec("[run]\nthreads = 1\noutput = a.csv\n");
  auto b = parse_spec("[run]\nthreads = 4\noutput = b.csv\n");
  CHECK(echo_spec(a) == echo_spec(b));
  const auto c = parse_spec("[run]\nseed = 2\n");
  CHECK(echo_spec(a) != echo_spec(c));
  const auto round = parse_spec(echo_spec(a));
  CHECK(echo_spec(round) == echo_spec(a));
}

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(hits.size(), 3, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) {
    CHECK(h.load() == 1);
  }
  CHECK_THROWS_AS(parallel_for(10, 2,
                               [](std::size_t i) {
                                 if (i == 7) {
                                   throw std::runtime_error("boom");
                                 }
                               }),
                  std::runtime_error);
}

TEST_CASE("pipeline is deterministic across thread counts") {
  const NetworkConfig cfg;
  const auto budget = LinkBudget::from_snr(100.0, 1);
  const auto frame = make_frame(5e-4);
  const auto alloc = alpha_star_numeric(cfg, budget, frame).allocation;
  PipelineOptions opts;
  opts.trials = 60;
  opts.seed = 3;
  opts.threads = 1;
  const auto a = simulate_effective_rate(cfg, budget, frame, alloc, opts);
  opts.threads = 3;
  const auto b = simulate_effective_rate(cfg, budget, frame, alloc, opts);
  CHECK(a.effective_rate == b.effective_rate);
  CHECK(a.error_variance == b.error_variance);
  CHECK(a.trials == 60);
  CHECK(a.effective_rate == doctest::Approx(a.sum_rate * (1.0 - alloc.total() / frame.length)));
  CHECK(a.error_variance == doctest::Approx(error_variance(cfg, budget, alloc)).epsilon(0.15));
  opts.point = 1;
  CHECK(simulate_effective_rate(cfg, budget, frame, alloc, opts).effective_rate != a.effective_rate);
  opts.leakage = LeakageAccounting::realized;
  CHECK(std::isfinite(simulate_effective_rate(cfg, budget, frame, alloc, opts).effective_rate));
}

TEST_CASE("sweep output") {
  auto spec = parse_spec("[sweep]\nkind = snr\nfrom = 10\nto = 30\npoints = 3\n[run]\ntrials = 20\nthreads = 1\n");
  const auto table = run_sweep(spec);
  CHECK(table.rows.size() == 3);
  for (const auto& h : table.header) {
    CHECK(h.find('[') != std::string::npos);
    CHECK(h.back() == ']');
  }
  const auto rate = table.column("eff_rate_numeric");
  const auto genie = table.column("genie_rate");
  for (const auto& row : table.rows) {
    CHECK(row.size() == table.header.size());
    CHECK(row[rate] < row[genie]);
  }
  CHECK_THROWS(table.column("missing"));

  const std::string first = csv(spec);
  spec.threads = 2;
  CHECK(csv(spec) == first);
  CHECK(first.rfind("# iaoverhead", 0) == 0);
  CHECK(first.find("# seed = 1") != std::string::npos);

  auto off = spec;
  off.monte_carlo = false;
  CHECK(run_sweep(off).header.size() + 4 == table.header.size());

  auto shortframe = parse_spec("[sweep]\nkind = tframe\nfrom = 10\nto = 1000\npoints = 2\nspacing = log\n[run]\nmonte_carlo = false\n");
  const auto t = run_sweep(shortframe);
  CHECK(std::isnan(t.rows[0][t.column("alpha_numeric")]));
  CHECK(std::isfinite(t.rows[1][t.column("alpha_numeric")]));

  auto cluster = parse_spec("[sweep]\nkind = cluster\nfrom = 100\nto = 10000\npoints = 3\nspacing = log\n[link]\nsnr_db = 35\n");
  const auto c = run_sweep(cluster);
  CHECK(c.rows.size() == 3);
  CHECK(c.rows[0][c.column("k_star_exhaustive")] == 3.0);
  CHECK(c.rows[0][c.column("k_star_rule")] == 3.0);
}

TEST_CASE("validation catches a corrupted closed form") {
  ValidateOptions opts;
  opts.ia_draws = 20;
  opts.gain_trials = 2000;
  opts.csi_trials = 400;
  opts.split_samples = 50;
  opts.threads = 2;
  opts.closed_form = [](const NetworkConfig& cfg, const LinkBudget& budget, const OverheadAllocation& alloc) {
    return 1.5 * error_variance(cfg, budget, alloc);
  };
  const auto report = run_validate(opts);
  bool found = false;
  for (const auto& c : report.checks) {
    if (c.name == "zf_error_vs_closed_form") {
      found = true;
      CHECK_FALSE(c.passed);
    }
    if (c.name == "split_fractions") {
      CHECK(c.passed);
    }
  }
  CHECK(found);
  CHECK_FALSE(report.passed());
  std::ostringstream out;
  write_report(report, out);
  CHECK(out.str().find("FAIL zf_error_vs_closed_form") != std::string::npos);
}
