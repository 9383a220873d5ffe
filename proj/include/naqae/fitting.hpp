#pragma once

// Least-squares fitting of the three noise-model families to per-depth
// outcome frequencies, with the coefficient of determination as the
// goodness-of-fit measure.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "naqae/device_sim.hpp"
#include "naqae/noise_models.hpp"

namespace naqae {

struct FrequencyPoint {
  GroverDepth m = 0;
  double p1_hat = 0.0;
  double weight = 1.0;
};

// p1_hat = ones / shots, unit weights.
std::vector<FrequencyPoint> to_frequency_points(std::span<const ShotRecord> records);

enum class ModelKind { gaussian, gaussian_zero_mean, depolarizing };

std::string_view to_string(ModelKind kind);
// Accepts "gaussian", "gaussian_zero_mean"/"zero-mean", "depolarizing"/"depol".
ModelKind parse_model_kind(std::string_view text);
std::size_t parameter_count(ModelKind kind);

struct FitResult {
  ModelKind model_kind = ModelKind::gaussian;
  std::string label;
  double theta_hat = 0.0;
  std::variant<GaussianNoiseParams, DepolParams> noise_params = GaussianNoiseParams{};
  double sse = 0.0;
  double r_squared = 0.0;
  // sqrt(weight) * (observed - predicted), so sse == sum of squares.
  std::vector<double> residuals;
  std::vector<double> predicted;
  bool converged = true;
};

// 1 - SS_res / SS_tot, SS_tot taken about the mean of `observed`.
// Throws UsageError on empty or mismatched input, DegenerateDataError if
// every observation is identical.
double r_squared(std::span<const double> observed, std::span<const double> predicted);

struct FitConfig {
  std::size_t theta_points = 64;     // over [0, pi/2]
  std::size_t k_mu_points = 33;      // over [k_mu_grid_min, k_mu_grid_max]
  double k_mu_grid_min = -0.3;
  double k_mu_grid_max = 0.3;
  std::size_t k_sigma_points = 33;   // log-spaced over [k_sigma_grid_min, k_sigma_grid_max]
  double k_sigma_grid_min = 1e-5;
  double k_sigma_grid_max = 0.5;
  std::size_t starts = 12;           // grid local minima refined by the simplex
  int max_iterations = 500;
  double simplex_tolerance = 1e-10;
  int polish_restarts = 3;
  unsigned threads = 1;              // 0 = hardware concurrency
};

// Refinement bounds: theta in [0, pi/2], k_mu in [-pi/2, pi/2] (k_mu is only
// identified modulo pi), k_sigma in [0, kMaxKSigma], p_coh in [0, 1].
inline constexpr double kMaxKSigma = 10.0;

// Predicted p1 at depth m for the given model parameters.
double model_p1(ModelKind kind, double theta, std::span<const double> noise, GroverDepth m);

// Multi-start grid search followed by bounded Nelder-Mead refinement of the
// best grid local minima. Ties within 1e-12 in SSE resolve to the smallest
// theta, then the smallest k_sigma (or largest p_coh). The Gaussian family
// is additionally refined from the zero-mean optimum, so its SSE never
// exceeds the zero-mean fit's.
FitResult fit_model(std::span<const FrequencyPoint> data, ModelKind kind,
                    const FitConfig& config = {});

// Fits every family to the same data, sharing the zero-mean fit.
std::vector<FitResult> fit_all(std::span<const FrequencyPoint> data, const FitConfig& config = {});

// Model comparison: one row per label (sorted), one R^2 per model.
// A model is flagged best when its R^2 rounded to 4 decimals equals the
// row maximum rounded the same way.
struct FitReportRow {
  std::string label;
  std::map<ModelKind, double> r_squared;
  std::map<ModelKind, bool> best;
};

struct FitReport {
  std::vector<FitReportRow> rows;
};

FitReport fit_report(std::span<const FitResult> results);

}  // namespace naqae
