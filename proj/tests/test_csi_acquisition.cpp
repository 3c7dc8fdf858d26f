// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "iaoh/csi_acquisition.hpp"
#include "iaoh/errors.hpp"
#include "oracles.hpp"

using namespace iaoh;

namespace {

const NetworkConfig kCfg{};

double entry_error(const ChannelMatrices& truth, const ChannelMatrices& est) {
  double e = 0.0;
  for (std::size_t b = 0; b < truth.blocks().size(); ++b) {
    e += (truth.blocks()[b] - est.blocks()[b]).squaredNorm();
  }
  return e / static_cast<double>(truth.blocks().size() * truth.rows() * truth.cols());
}

struct FeedbackRun {
  double error = 0.0;
  double energy = 0.0;
  std::vector<double> block;
};

FeedbackRun run_feedback(const LinkBudget& budget, const OverheadAllocation& alloc, int trials,
                         const AnalogFeedbackOptions& opts, std::uint64_t base) {
  FeedbackRun out;
  out.block.assign(9, 0.0);
  for (int t = 0; t < trials; ++t) {
    const auto ch = sample_channels(kCfg, base + t);
    const auto est = acquire_csi(ch, kCfg, budget, alloc, base + t, opts);
    out.error += entry_error(ch.forward, est.estimates) / trials;
    for (std::size_t b = 0; b < 9; ++b) {
      out.block[b] += (ch.forward.blocks()[b] - est.estimates.blocks()[b]).squaredNorm() / (4.0 * trials);
    }
    for (double e : est.feedback_energy) {
      out.energy += e / (3.0 * trials);
    }
  }
  return out;
}

OverheadAllocation reference_allocation() {
  return optimal_split(kCfg, LinkBudget::from_snr(100.0, 1), 300.0).allocation;
}

}  // namespace

TEST_CASE("orthogonal pilot banks") {
  for (int length : {6, 7, 12, 31}) {
    const auto bank = orthogonal_sequences(3, 2, length);
    REQUIRE(bank.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(bank[i].rows() == 2);
      CHECK(bank[i].cols() == length);
      for (int k = 0; k < 3; ++k) {
        const CMatrix g = bank[i] * bank[k].adjoint();
        const CMatrix expected = i == k ? CMatrix(CMatrix::Identity(2, 2)) : CMatrix(CMatrix::Zero(2, 2));
        CHECK((g - expected).cwiseAbs().maxCoeff() < 1e-13);
      }
    }
  }
  CHECK_THROWS_AS(orthogonal_sequences(3, 2, 5), InvalidConfig);
}

TEST_CASE("allocation minimums") {
  const OverheadAllocation ok{6, 6, 18};
  CHECK(ok.total() == 30);
  CHECK(ok.satisfies_minimums(kCfg));
  CHECK_NOTHROW(ok.validate(kCfg));
  for (const OverheadAllocation bad : {OverheadAllocation{5, 6, 18}, OverheadAllocation{6, 5, 18},
                                       OverheadAllocation{6, 6, 17}}) {
    CHECK_FALSE(bad.satisfies_minimums(kCfg));
    CHECK_THROWS_AS(bad.validate(kCfg), InvalidConfig);
  }
}

TEST_CASE("training phases match their MMSE statistics") {
  constexpr int kTrials = 3000;
  {
    const int length = 6;
    LinkBudget budget;
    budget.power = 100.0 * 2 / length;
    double e = 0.0;
    for (int t = 0; t < kTrials; ++t) {
      const auto ch = sample_channels(kCfg, 900 + t);
      const auto r = forward_training(ch.forward, kCfg, budget, length, 900 + t);
      e += entry_error(ch.forward, r.estimates) / kTrials;
      CHECK(r.error_variance == doctest::Approx(1.0 / 101.0));
      CHECK(r.estimate_variance == doctest::Approx(100.0 / 101.0));
    }
    CHECK(e == doctest::Approx(1.0 / 101.0).epsilon(0.03));
  }
  {
    const int length = 6;
    LinkBudget budget;
    budget.power = 50.0 * 2 / length;
    double e = 0.0;
    for (int t = 0; t < kTrials; ++t) {
      const auto ch = sample_channels(kCfg, 7000 + t);
      const auto r = feedback_training(ch.feedback, kCfg, budget, length, 7000 + t);
      e += entry_error(ch.feedback, r.estimates) / kTrials;
      CHECK(r.error_variance == doctest::Approx(1.0 / 51.0));
    }
    CHECK(e == doctest::Approx(1.0 / 51.0).epsilon(0.03));
  }
  {
    const auto ch = sample_channels(kCfg, 1);
    LinkBudget strong;
    strong.power = 1e12;
    const auto r = forward_training(ch.forward, kCfg, strong, 6, 1);
    CHECK(entry_error(ch.forward, r.estimates) < 1e-10);
    CHECK_THROWS_AS(forward_training(ch.forward, kCfg, strong, 5, 1), InvalidConfig);
    CHECK_THROWS_AS(feedback_training(ch.feedback, kCfg, strong, 5, 1), InvalidConfig);
  }
}

TEST_CASE("closed-form error variance") {
  LinkBudget budget;
  budget.power = 10.0;
  const OverheadAllocation alloc{100, 100, 100};
  CHECK(error_variance(kCfg, budget, alloc) == doctest::Approx(0.006).epsilon(1e-12));
  const auto terms = error_terms(kCfg, budget, alloc);
  CHECK(terms.forward_training == doctest::Approx(0.002));
  CHECK(terms.feedback_training == doctest::Approx(0.001));
  CHECK(terms.feedback == doctest::Approx(0.003));
  CHECK(terms.total() == doctest::Approx(0.006));

  LinkBudget doubled = budget;
  doubled.power = 20.0;
  CHECK(error_variance(kCfg, doubled, alloc) == doctest::Approx(0.003));

  const OverheadAllocation huge{1000000, 1000000, 1000000};
  CHECK(error_variance(kCfg, budget, huge) < 1e-5);

  const oracle::Net net;
  for (const OverheadAllocation a : {OverheadAllocation{6, 6, 18}, OverheadAllocation{40, 25, 70}}) {
    for (double gamma : {0.1, 1.0, 4.0}) {
      LinkBudget b;
      b.power = 30.0;
      b.feedback_ratio = gamma;
      CHECK(error_variance(kCfg, b, a) ==
            doctest::Approx(oracle::csi_error(net, 1.0, 30.0, gamma, a.forward_training, a.feedback_training,
                                              a.feedback)));
    }
  }

  const NetworkConfig square{2, 1, 2, 1};
  CHECK_THROWS_AS(error_variance(square, budget, OverheadAllocation{2, 4, 4}), InvalidConfig);
  CHECK_THROWS_AS(error_variance(kCfg, budget, OverheadAllocation{5, 100, 100}), InvalidConfig);
}

TEST_CASE("intermediate error expression") {
  LinkBudget budget;
  budget.power = 10.0;
  const OverheadAllocation equal{100, 100, 100};
  CHECK(error_variance_wishart(kCfg, budget, equal) > error_variance(kCfg, budget, equal));
  CHECK(error_variance_wishart(kCfg, budget, equal, FeedbackNoiseLength::feedback_training_symbols) ==
        error_variance_wishart(kCfg, budget, equal));
  const OverheadAllocation uneven{50, 40, 120};
  CHECK(error_variance_wishart(kCfg, budget, uneven, FeedbackNoiseLength::feedback_training_symbols) >
        error_variance_wishart(kCfg, budget, uneven));
  LinkBudget strong;
  strong.power = 1e6;
  CHECK(error_variance_wishart(kCfg, strong, uneven) ==
        doctest::Approx(error_variance(kCfg, strong, uneven)).epsilon(1e-4));
}

TEST_CASE("analog feedback against the closed forms") {
  const LinkBudget budget = LinkBudget::from_snr(100.0, 1);
  const auto alloc = reference_allocation();
  constexpr int kTrials = 2000;
  AnalogFeedbackOptions zf;
  zf.estimator = FeedbackEstimator::zero_forcing;
  const auto zf_run = run_feedback(budget, alloc, kTrials, zf, 40000);
  const auto mmse_run = run_feedback(budget, alloc, kTrials, {}, 40000);

  const double closed = error_variance(kCfg, budget, alloc);
  CHECK(zf_run.error == doctest::Approx(closed).epsilon(0.05));
  const double exact = oracle::zf_error_exact(oracle::Net{}, 1.0, budget.power, 1.0, alloc.forward_training,
                                              alloc.feedback_training, alloc.feedback);
  CHECK(zf_run.error == doctest::Approx(exact).epsilon(0.05));
  CHECK(zf_run.energy == doctest::Approx(1.0).epsilon(0.01));
  CHECK(mmse_run.error <= zf_run.error);
  for (std::size_t b = 0; b < 9; ++b) {
    CHECK(mmse_run.block[b] <= zf_run.block[b]);
  }

  const auto ch = sample_channels(kCfg, 3);
  const auto est = acquire_csi(ch, kCfg, budget, alloc, 3, zf);
  CHECK(est.error_variance == doctest::Approx(closed));
  CHECK(est.feedback_energy.size() == 3);
}

TEST_CASE("three-way ablation isolates each error source") {
  LinkBudget budget;
  budget.power = 10.0;
  const OverheadAllocation alloc{30, 20, 40};
  const auto terms = error_terms(kCfg, budget, alloc);
  AnalogFeedbackOptions opts;
  opts.estimator = FeedbackEstimator::zero_forcing;

  opts.noise = {true, false, false};
  CHECK(run_feedback(budget, alloc, 1500, opts, 60000).error ==
        doctest::Approx(terms.forward_training).epsilon(0.05));
  opts.noise = {false, true, false};
  const double fb_train = run_feedback(budget, alloc, 1500, opts, 61000).error;
  const double fb_train_exact = oracle::zf_error_exact(oracle::Net{}, 1.0, 10.0, 1.0, 1e300, alloc.feedback_training,
                                                       1e300);
  CHECK(fb_train == doctest::Approx(fb_train_exact).epsilon(0.05));
  opts.noise = {false, false, true};
  CHECK(run_feedback(budget, alloc, 1500, opts, 62000).error == doctest::Approx(terms.feedback).epsilon(0.05));

  opts.noise = {false, false, false};
  CHECK(run_feedback(budget, alloc, 5, opts, 63000).error < 1e-20);
}

TEST_CASE("singular feedback estimate is reported") {
  const LinkBudget budget = LinkBudget::from_snr(100.0, 1);
  const auto alloc = reference_allocation();
  const auto ch = sample_channels(kCfg, 11);
  const auto fwd = forward_training(ch.forward, kCfg, budget, alloc.forward_training, 11);
  TrainingResult zero = feedback_training(ch.feedback, kCfg, budget, alloc.feedback_training, 11);
  for (auto& m : zero.estimates.blocks()) {
    m.setZero();
  }
  AnalogFeedbackOptions zf;
  zf.estimator = FeedbackEstimator::zero_forcing;
  CHECK_THROWS_AS(analog_feedback(fwd, zero, ch.feedback, kCfg, budget, alloc, 11, zf), SingularFeedbackChannel);
}

TEST_CASE("closed-form split") {
  LinkBudget budget;
  budget.power = 10.0;
  CHECK(split_mu(kCfg, budget) == doctest::Approx(8.2925).epsilon(1e-4));
  const auto f = split_fractions(kCfg, budget);
  CHECK(std::abs(f[0] - 0.3411) <= 1e-4);
  CHECK(std::abs(f[1] - 0.2412) <= 1e-4);
  CHECK(std::abs(f[2] - 0.4177) <= 1e-4);
  CHECK(f[0] + f[1] + f[2] == doctest::Approx(1.0));
  CHECK(optimal_error_variance(kCfg, budget, 100.0) == doctest::Approx(0.01719).epsilon(1e-3));

  const auto split = optimal_split(kCfg, budget, 100.0);
  CHECK(split.error_variance_continuous == doctest::Approx(optimal_error_variance(kCfg, budget, 100.0)));
  CHECK(split.allocation.total() == 100);
  CHECK(split.allocation.satisfies_minimums(kCfg));
  CHECK(split.continuous[0] == doctest::Approx(34.11).epsilon(1e-3));
  CHECK(split.error_variance_integer == doctest::Approx(error_variance(kCfg, budget, split.allocation)));

  // The continuous optimum equals the error variance at the continuous lengths.
  const oracle::Net net;
  CHECK(oracle::csi_error(net, 1.0, 10.0, 1.0, split.continuous[0], split.continuous[1], split.continuous[2]) ==
        doctest::Approx(split.error_variance_continuous));

  CHECK_THROWS_AS(optimal_split(kCfg, budget, 29.0), InfeasibleBudget);
  CHECK_NOTHROW(optimal_split(kCfg, budget, 30.0));
  CHECK(optimal_split(kCfg, budget, 30.0).allocation == OverheadAllocation{6, 6, 18});
}

TEST_CASE("integer split equals the brute-force optimum") {
  const oracle::Net net;
  for (double gamma : {0.25, 1.0, 3.0}) {
    for (int total : {30, 31, 45, 64, 100, 150, 257, 400}) {
      CAPTURE(gamma);
      CAPTURE(total);
      LinkBudget budget;
      budget.power = 10.0;
      budget.feedback_ratio = gamma;
      const auto split = optimal_split(kCfg, budget, total);
      const auto brute = oracle::brute_force_split(net, 1.0, 10.0, gamma, total);
      CHECK(split.error_variance_integer == doctest::Approx(brute.error).epsilon(1e-12));
      CHECK(split.error_variance_integer >= split.error_variance_continuous * (1.0 - 1e-12));
      if (total >= 100) {
        CHECK(split.error_variance_integer <= 1.02 * split.error_variance_continuous);
      }
    }
  }
}

TEST_CASE("split beats random allocations") {
  LinkBudget budget;
  budget.power = 10.0;
  std::mt19937_64 engine(5);
  for (int total : {40, 120, 600}) {
    const auto split = optimal_split(kCfg, budget, total);
    const int spare = total - 30;
    std::uniform_int_distribution<int> pick(0, spare);
    for (int r = 0; r < 1000; ++r) {
      int a = pick(engine);
      int b = pick(engine);
      if (a > b) {
        std::swap(a, b);
      }
      const OverheadAllocation random{6 + a, 6 + b - a, 18 + spare - b};
      REQUIRE(random.total() == total);
      CHECK(split.error_variance_integer <= error_variance(kCfg, budget, random));
    }
  }
}

TEST_CASE("minimum overhead fraction") {
  CHECK(alpha_min(kCfg, 1000.0) == doctest::Approx(0.03));
  CHECK(alpha_min(kCfg, 30.0) == doctest::Approx(1.0));
  CHECK(alpha_min(kCfg, 100.0) == doctest::Approx(0.30));
  CHECK_THROWS_AS(alpha_min(kCfg, 29.0), InfeasibleBudget);
}
