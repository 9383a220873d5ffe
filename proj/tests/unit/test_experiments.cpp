#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "naqae/errors.hpp"
#include "naqae/experiments.hpp"

namespace naqae {
namespace {

using std::numbers::pi;

ExperimentConfig small_config(NoiseModel model, std::size_t reps, std::uint64_t seed = 1) {
  ExperimentConfig c;
  c.device.amp = Amplitude(pi / 6);
  c.device.model = model;
  c.seed = seed;
  c.replications = reps;
  c.max_depth = 6;
  c.grid.points = 2000;
  return c;
}

TEST(Settings, NamesRoundTrip) {
  for (auto s : {Setting::noisy_a, Setting::noisy_b, Setting::noise_aware, Setting::noiseless}) {
    EXPECT_EQ(parse_setting(to_string(s)), s);
  }
  EXPECT_THROW(parse_setting("noisy_c"), UsageError);
}

TEST(Config, DefaultsAndValidation) {
  auto c = small_config(GaussianNoiseParams{0.0, 0.055}, 3);
  EXPECT_NEAR(c.truth(), 0.25, 1e-15);
  EXPECT_EQ(c.assumed_k_sigma(), 0.055);
  c.k_sigma_assumed = 0.1;
  EXPECT_EQ(c.assumed_k_sigma(), 0.1);
  c.replications = 0;
  EXPECT_THROW(c.validate(), UsageError);
  c.replications = 1;
  c.truth_a = 1.5;
  EXPECT_THROW(c.validate(), UsageError);
}

TEST(Config, DeviceKSigma) {
  SimulatedDevice d;
  EXPECT_EQ(device_k_sigma(d), 0.0);
  d.model = DepolParams{std::exp(-0.11)};
  EXPECT_NEAR(device_k_sigma(d), 0.055, 1e-15);
}

TEST(Schedules, PerSetting) {
  auto c = small_config(GaussianNoiseParams{0.0, 0.055}, 1);
  c.max_depth = 12;
  EXPECT_EQ(setting_schedule(c, Setting::noise_aware).shots(),
            (std::vector<std::uint64_t>{20, 24, 29, 33, 38, 42, 46, 51, 55, 60, 64, 68, 73}));
  EXPECT_EQ(setting_schedule(c, Setting::noisy_b).shots(), std::vector<std::uint64_t>(13, 20));
}

TEST(Trial, NoiselessFinalEstimateClose) {
  auto c = small_config(Noiseless{}, 1);
  c.max_depth = 12;
  c.grid = {};
  const auto est = run_qae_trial(c, Setting::noiseless, 0);
  ASSERT_EQ(est.size(), 13u);
  EXPECT_LT(std::abs(est.back().a_hat - 0.25), 0.02);
}

TEST(Trial, DeterministicPerReplication) {
  const auto c = small_config(GaussianNoiseParams{0.0, 0.05}, 1);
  const auto a = run_qae_trial(c, Setting::noise_aware, 4);
  const auto b = run_qae_trial(c, Setting::noise_aware, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].a_hat, b[i].a_hat);
}

TEST(MonteCarlo, SingleReplicationIsAbsoluteError) {
  const auto c = small_config(GaussianNoiseParams{0.0, 0.05}, 1);
  const auto curves = run_monte_carlo(c);
  ASSERT_EQ(curves.size(), 4u);
  for (const auto& curve : curves) {
    const auto trial = run_qae_trial(c, parse_setting(curve.setting), 0);
    for (std::size_t m = 0; m < trial.size(); ++m) {
      EXPECT_NEAR(curve.points[m].rmse, std::abs(trial[m].a_hat - 0.25), 1e-15);
    }
  }
}

TEST(MonteCarlo, QueryAxisAccumulates) {
  auto c = small_config(GaussianNoiseParams{0.0, 0.055}, 1);
  c.settings = {Setting::noise_aware};
  const auto curve = run_monte_carlo(c).front();
  // 1*20 + 3*24 + 5*29
  EXPECT_EQ(curve.points[2].oracle_queries, 237u);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeCurves) {
  auto c = small_config(DepolParams{0.9}, 6);
  const auto one = run_monte_carlo(c);
  c.threads = 3;
  const auto three = run_monte_carlo(c);
  for (std::size_t s = 0; s < one.size(); ++s) {
    for (std::size_t m = 0; m < one[s].points.size(); ++m) {
      EXPECT_EQ(one[s].points[m].rmse, three[s].points[m].rmse);
    }
  }
}

TEST(MonteCarlo, NoiselessLargeShotsImproveWithDepth) {
  auto c = small_config(Noiseless{}, 20);
  c.device.amp = Amplitude(0.7);
  c.settings = {Setting::noiseless};
  c.n_shot_base = 2000;
  c.grid = {};
  const auto curve = run_monte_carlo(c).front();
  EXPECT_LT(curve.points.back().rmse, curve.points.front().rmse / 4);
}

TEST(MonteCarlo, BiasDriftOfNaiveEstimatorUnderShiftedMean) {
  // k_sigma = 0: every depth sees a deterministic over-rotation k_mu * m.
  auto c = small_config(GaussianNoiseParams{0.004, 0.0}, 10);
  c.device.amp = Amplitude(0.6);
  c.settings = {Setting::noisy_a};
  c.max_depth = 30;
  c.n_shot_base = 500;
  c.grid = {};
  double mean = 0.0;
  for (std::size_t r = 0; r < c.replications; ++r) {
    mean += run_qae_trial(c, Setting::noisy_a, r).back().a_hat / c.replications;
  }
  const double drifted = std::pow(std::sin(0.6 + 0.004 / 2), 2);
  EXPECT_NEAR(mean, drifted, 0.02);
}

TEST(Misspecification, LabelsCarryFactor) {
  auto c = small_config(GaussianNoiseParams{0.0, 0.05}, 2);
  const auto curves = run_misspecification_sweep(c, {0.5, 2.0});
  ASSERT_EQ(curves.size(), 4u);
  EXPECT_EQ(curves[0].setting, "noisy_b@x0.5");
  EXPECT_EQ(curves[1].setting, "noise_aware@x0.5");
  EXPECT_EQ(curves[3].setting, "noise_aware@x2");
  EXPECT_THROW(run_misspecification_sweep(c, {-1.0}), UsageError);
}

}  // namespace
}  // namespace naqae
