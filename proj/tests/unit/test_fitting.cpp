#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <vector>

#include "naqae/device_sim.hpp"
#include "naqae/errors.hpp"
#include "naqae/fitting.hpp"
#include "property.hpp"

namespace naqae {
namespace {

using std::numbers::pi;

std::vector<FrequencyPoint> exact_points(double theta, NoiseModel model, GroverDepth max_m) {
  std::vector<FrequencyPoint> pts;
  for (GroverDepth m = 0; m <= max_m; ++m) pts.push_back({m, p1(Amplitude(theta), m, model), 1.0});
  return pts;
}

std::vector<FrequencyPoint> sampled_points(double theta, NoiseModel model, GroverDepth max_m,
                                           std::uint64_t shots, std::uint64_t seed) {
  SimulatedDevice dev;
  dev.amp = Amplitude(theta);
  dev.model = model;
  dev.seed = seed;
  std::vector<GroverDepth> depths;
  for (GroverDepth m = 0; m <= max_m; ++m) depths.push_back(m);
  const std::vector<std::uint64_t> n(depths.size(), shots);
  const auto rec = run_depth_sweep(dev, depths, n);
  return to_frequency_points(rec);
}

std::vector<double> params_of(const FitResult& r) {
  std::vector<double> x{r.theta_hat};
  if (const auto* g = std::get_if<GaussianNoiseParams>(&r.noise_params)) {
    if (r.model_kind == ModelKind::gaussian) x.push_back(g->k_mu);
    x.push_back(g->k_sigma);
  } else {
    x.push_back(std::get<DepolParams>(r.noise_params).p_coh);
  }
  return x;
}

double sse_at(ModelKind kind, const std::vector<FrequencyPoint>& data, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& p : data) {
    const double r = p.p1_hat - model_p1(kind, x[0], std::span(x).subspan(1), p.m);
    s += p.weight * r * r;
  }
  return s;
}

TEST(RSquared, Examples) {
  const std::vector<double> obs{0.0, 1.0, 2.0};
  EXPECT_DOUBLE_EQ(r_squared(obs, obs), 1.0);
  const std::vector<double> mean(3, 1.0);
  EXPECT_DOUBLE_EQ(r_squared(obs, mean), 0.0);
  const std::vector<double> pred{0.0, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(r_squared(obs, pred), 0.5);
}

TEST(RSquared, Errors) {
  const std::vector<double> flat{0.3, 0.3};
  EXPECT_THROW(r_squared(flat, flat), DegenerateDataError);
  const std::vector<double> one{0.3};
  EXPECT_THROW(r_squared(flat, one), UsageError);
  EXPECT_THROW(r_squared({}, {}), UsageError);
}

TEST(ModelKind, NamesRoundTrip) {
  for (auto k : {ModelKind::gaussian, ModelKind::gaussian_zero_mean, ModelKind::depolarizing}) {
    EXPECT_EQ(parse_model_kind(to_string(k)), k);
  }
  EXPECT_EQ(parse_model_kind("zero-mean"), ModelKind::gaussian_zero_mean);
  EXPECT_EQ(parse_model_kind("depol"), ModelKind::depolarizing);
  EXPECT_THROW(parse_model_kind("lorentzian"), UsageError);
  EXPECT_EQ(parameter_count(ModelKind::gaussian), 3u);
  EXPECT_EQ(parameter_count(ModelKind::depolarizing), 2u);
}

TEST(FitModel, RecoversExactGaussianParameters) {
  const auto data = exact_points(0.5, GaussianNoiseParams{0.01, 0.02}, 40);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = fit_model(data, ModelKind::gaussian);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& g = std::get<GaussianNoiseParams>(r.noise_params);
  EXPECT_NEAR(r.theta_hat, 0.5, 1e-3);
  EXPECT_NEAR(g.k_mu, 0.01, 1e-3);
  EXPECT_NEAR(g.k_sigma, 0.02, 1e-3);
  EXPECT_GE(r.r_squared, 1.0 - 1e-9);
  EXPECT_LT(secs, 30.0);
}

TEST(FitModel, NoiselessDataGivesVanishingNoise) {
  const auto data = exact_points(0.7, Noiseless{}, 20);
  const auto fits = fit_all(data);
  ASSERT_EQ(fits.size(), 3u);
  for (const auto& f : fits) {
    EXPECT_NEAR(f.r_squared, 1.0, 1e-9) << to_string(f.model_kind);
    EXPECT_NEAR(f.theta_hat, 0.7, 1e-5);
    if (const auto* g = std::get_if<GaussianNoiseParams>(&f.noise_params)) {
      EXPECT_LT(g->k_sigma, 1e-6);
    } else {
      EXPECT_GT(std::get<DepolParams>(f.noise_params).p_coh, 1.0 - 1e-6);
    }
  }
}

TEST(FitModel, ShiftedMeanFavoursFullGaussianFamily) {
  const auto data = exact_points(pi / 6, GaussianNoiseParams{0.05, 0.02}, 30);
  const auto fits = fit_all(data);
  EXPECT_GT(fits[0].r_squared, fits[1].r_squared);
  EXPECT_GT(fits[0].r_squared, fits[2].r_squared);
  EXPECT_NEAR(fits[1].r_squared, fits[2].r_squared, 1e-8);
}

TEST(FitModel, RejectsBadInput) {
  std::vector<FrequencyPoint> two{{0, 0.2, 1.0}, {1, 0.4, 1.0}};
  EXPECT_THROW(fit_model(two, ModelKind::gaussian), UsageError);
  std::vector<FrequencyPoint> bad{{0, 1.2, 1.0}, {1, 0.4, 1.0}, {2, 0.4, 1.0}};
  EXPECT_THROW(fit_model(bad, ModelKind::depolarizing), UsageError);
}

TEST(FitModel, RSquaredMatchesRecomputation) {
  const auto data = sampled_points(0.9, GaussianNoiseParams{0.02, 0.01}, 25, 2000, 4);
  for (const auto& f : fit_all(data)) {
    std::vector<double> obs;
    for (const auto& p : data) obs.push_back(p.p1_hat);
    EXPECT_EQ(f.r_squared, r_squared(obs, f.predicted));
    double s = 0.0;
    for (double r : f.residuals) s += r * r;
    EXPECT_NEAR(s, f.sse, 1e-15);
  }
}

TEST(FitProperty, NestingEquivalenceAndLocalOptimality) {
  testing::for_all(6, 21, [](testing::Gen& g, std::size_t i) {
    const double theta = g.uniform(0.1, 1.4);
    const GaussianNoiseParams noise{g.uniform(-0.06, 0.06), g.uniform(0.002, 0.05)};
    const auto data = sampled_points(theta, noise, 30, 1000, 100 + i);
    const auto fits = fit_all(data);
    ASSERT_LE(fits[0].sse, fits[1].sse + 1e-12) << "case " << i;
    ASSERT_NEAR(fits[1].sse, fits[2].sse, 1e-9) << "case " << i;

    for (const auto& f : fits) {
      const auto x = params_of(f);
      const double base = sse_at(f.model_kind, data, x);
      for (std::size_t k = 0; k < x.size(); ++k) {
        for (double step : {-1e-4, 1e-4}) {
          auto y = x;
          y[k] += step;
          const bool in_bounds = y[k] >= 0.0 && (k == 0 ? y[k] <= pi / 2 : true) &&
                                 (f.model_kind == ModelKind::depolarizing && k == 1 ? y[k] <= 1.0
                                                                                    : true);
          const bool signed_k_mu = f.model_kind == ModelKind::gaussian && k == 1;
          if (!in_bounds && !signed_k_mu) continue;
          ASSERT_GE(sse_at(f.model_kind, data, y), base - 1e-12)
              << "case " << i << " " << to_string(f.model_kind) << " param " << k;
        }
      }
    }
  });
}

TEST(FitReport, SingleResult) {
  FitResult r;
  r.label = "A1";
  r.r_squared = 0.9;
  const std::vector<FitResult> v{r};
  const auto rep = fit_report(v);
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_TRUE(rep.rows[0].best.at(ModelKind::gaussian));
}

TEST(FitReport, BestFlagAndFourDecimalTies) {
  std::vector<FitResult> v(3);
  v[0].model_kind = ModelKind::gaussian;
  v[0].r_squared = 0.95;
  v[1].model_kind = ModelKind::gaussian_zero_mean;
  v[1].r_squared = 0.99121;
  v[2].model_kind = ModelKind::depolarizing;
  v[2].r_squared = 0.99119;
  const auto rep = fit_report(v);
  EXPECT_FALSE(rep.rows[0].best.at(ModelKind::gaussian));
  EXPECT_TRUE(rep.rows[0].best.at(ModelKind::gaussian_zero_mean));
  EXPECT_TRUE(rep.rows[0].best.at(ModelKind::depolarizing));

  v[2].model_kind = ModelKind::gaussian_zero_mean;
  EXPECT_THROW(fit_report(v), UsageError);
}

TEST(FitReport, RowsSortedByLabel) {
  std::vector<FitResult> v(2);
  v[0].label = "b";
  v[1].label = "a";
  const auto rep = fit_report(v);
  EXPECT_EQ(rep.rows[0].label, "a");
  EXPECT_EQ(rep.rows[1].label, "b");
}

}  // namespace
}  // namespace naqae
