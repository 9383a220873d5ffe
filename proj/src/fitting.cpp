#include "naqae/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include "naqae/errors.hpp"
#include "naqae/nelder_mead.hpp"
#include "naqae/parallel.hpp"

namespace naqae {

std::vector<FrequencyPoint> to_frequency_points(std::span<const ShotRecord> records) {
  std::vector<FrequencyPoint> points;
  points.reserve(records.size());
  for (const auto& r : records) {
    r.validate();
    points.push_back({r.m, r.frequency(), 1.0});
  }
  return points;
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::gaussian:
      return "gaussian";
    case ModelKind::gaussian_zero_mean:
      return "gaussian_zero_mean";
    case ModelKind::depolarizing:
      return "depolarizing";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "gaussian") return ModelKind::gaussian;
  if (text == "gaussian_zero_mean" || text == "zero-mean") return ModelKind::gaussian_zero_mean;
  if (text == "depolarizing" || text == "depol") return ModelKind::depolarizing;
  throw UsageError("unknown model kind '" + std::string(text) + "'");
}

std::size_t parameter_count(ModelKind kind) { return kind == ModelKind::gaussian ? 3 : 2; }

double r_squared(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.empty() || observed.size() != predicted.size()) {
    throw UsageError("r_squared: inputs must be non-empty and of equal length");
  }
  const double mean =
      std::accumulate(observed.begin(), observed.end(), 0.0) / static_cast<double>(observed.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
    ss_tot += (observed[i] - mean) * (observed[i] - mean);
  }
  if (ss_tot == 0.0) {
    throw DegenerateDataError("r_squared: observations are constant (SS_tot == 0)");
  }
  return 1.0 - ss_res / ss_tot;
}

double model_p1(ModelKind kind, double theta, std::span<const double> noise, GroverDepth m) {
  const Amplitude amp(theta);
  switch (kind) {
    case ModelKind::gaussian:
      return p1_gaussian_closed(amp, m, {noise[0], noise[1]});
    case ModelKind::gaussian_zero_mean:
      return p1_gaussian_closed(amp, m, {0.0, noise[0]});
    case ModelKind::depolarizing:
      return p1_depolarizing(amp, m, {noise[0]});
  }
  throw UsageError("model_p1: unknown model kind");
}

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTieTolerance = 1e-12;

// Parameter vectors: gaussian [theta, k_mu, k_sigma], zero-mean
// [theta, k_sigma], depolarizing [theta, p_coh].
using Params = std::vector<double>;

double sse_of(ModelKind kind, std::span<const FrequencyPoint> data, std::span<const double> x) {
  double sse = 0.0;
  for (const auto& pt : data) {
    const double r = pt.p1_hat - model_p1(kind, x[0], x.subspan(1), pt.m);
    sse += pt.weight * r * r;
  }
  return sse;
}

// Comparable "noise strength" for tie-breaking: smaller k_sigma first.
double noise_strength(ModelKind kind, std::span<const double> x) {
  switch (kind) {
    case ModelKind::gaussian:
      return x[2];
    case ModelKind::gaussian_zero_mean:
      return x[1];
    case ModelKind::depolarizing:
      return -x[1];
  }
  return 0.0;
}

struct Candidate {
  Params x;
  double sse;
  bool converged;
};

// True when a should be preferred over b.
bool better(ModelKind kind, const Candidate& a, const Candidate& b) {
  if (a.sse < b.sse - kTieTolerance) return true;
  if (b.sse < a.sse - kTieTolerance) return false;
  if (a.x[0] != b.x[0]) return a.x[0] < b.x[0];
  return noise_strength(kind, a.x) < noise_strength(kind, b.x);
}

struct Grid {
  std::vector<std::vector<double>> axes;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.size();
    return n;
  }
  std::vector<std::size_t> unflatten(std::size_t flat) const {
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t d = axes.size(); d-- > 0;) {
      idx[d] = flat % axes[d].size();
      flat /= axes[d].size();
    }
    return idx;
  }
  std::size_t flatten(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < axes.size(); ++d) flat = flat * axes[d].size() + idx[d];
    return flat;
  }
  Params point(std::span<const std::size_t> idx) const {
    Params x(axes.size());
    for (std::size_t d = 0; d < axes.size(); ++d) x[d] = axes[d][idx[d]];
    return x;
  }
};

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  std::vector<double> v = linspace(std::log(lo), std::log(hi), n);
  for (double& x : v) x = std::exp(x);
  return v;
}

Grid make_grid(ModelKind kind, const FitConfig& cfg) {
  Grid g;
  g.axes.push_back(linspace(0.0, kHalfPi, cfg.theta_points));
  if (kind == ModelKind::gaussian) {
    g.axes.push_back(linspace(cfg.k_mu_grid_min, cfg.k_mu_grid_max, cfg.k_mu_points));
  }
  std::vector<double> k_sigma = logspace(cfg.k_sigma_grid_min, cfg.k_sigma_grid_max, cfg.k_sigma_points);
  if (kind == ModelKind::depolarizing) {
    for (double& k : k_sigma) k = std::exp(-2.0 * k);
  }
  g.axes.push_back(std::move(k_sigma));
  return g;
}

Bounds bounds_for(ModelKind kind) {
  switch (kind) {
    case ModelKind::gaussian:
      return {{0.0, -kHalfPi, 0.0}, {kHalfPi, kHalfPi, kMaxKSigma}};
    case ModelKind::gaussian_zero_mean:
      return {{0.0, 0.0}, {kHalfPi, kMaxKSigma}};
    case ModelKind::depolarizing:
      return {{0.0, 0.0}, {kHalfPi, 1.0}};
  }
  throw UsageError("bounds_for: unknown model kind");
}

// Initial simplex edge per coordinate: the local grid spacing.
std::vector<double> steps_at(const Grid& grid, std::span<const double> x) {
  std::vector<double> steps(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) {
    const auto& axis = grid.axes[d];
    double step = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
      const double lo = std::min(axis[i], axis[i + 1]);
      const double hi = std::max(axis[i], axis[i + 1]);
      if (x[d] >= lo && x[d] <= hi) step = std::min(step, hi - lo);
    }
    if (!std::isfinite(step)) {
      // Outside the grid span (only reachable for refinement starts that
      // were not grid points): fall back to the nearest grid interval.
      const double a = std::abs(axis[1] - axis[0]);
      const double b = std::abs(axis[axis.size() - 1] - axis[axis.size() - 2]);
      step = std::min(a, b);
    }
    steps[d] = std::max(step, 1e-8);
  }
  return steps;
}

std::vector<Params> grid_starts(ModelKind kind, std::span<const FrequencyPoint> data,
                                const Grid& grid, const FitConfig& cfg) {
  const std::size_t total = grid.size();
  std::vector<double> values(total);
  parallel_for(total, cfg.threads, [&](std::size_t flat) {
    const auto idx = grid.unflatten(flat);
    values[flat] = sse_of(kind, data, grid.point(idx));
  });

  // Grid local minima (no neighbor strictly lower), best first.
  std::vector<Candidate> minima;
  const std::size_t dims = grid.axes.size();
  std::vector<std::size_t> neighbor(dims);
  for (std::size_t flat = 0; flat < total; ++flat) {
    const auto idx = grid.unflatten(flat);
    bool is_min = true;
    std::size_t offsets = 1;
    for (std::size_t d = 0; d < dims; ++d) offsets *= 3;
    for (std::size_t o = 0; o < offsets && is_min; ++o) {
      std::size_t code = o;
      bool valid = true;
      bool self = true;
      for (std::size_t d = 0; d < dims; ++d) {
        const int delta = static_cast<int>(code % 3) - 1;
        code /= 3;
        if (delta != 0) self = false;
        const auto pos = static_cast<long long>(idx[d]) + delta;
        if (pos < 0 || pos >= static_cast<long long>(grid.axes[d].size())) {
          valid = false;
          break;
        }
        neighbor[d] = static_cast<std::size_t>(pos);
      }
      if (valid && !self && values[grid.flatten(neighbor)] < values[flat]) is_min = false;
    }
    if (is_min) minima.push_back({grid.point(idx), values[flat], true});
  }
  std::sort(minima.begin(), minima.end(),
            [kind](const Candidate& a, const Candidate& b) { return better(kind, a, b); });
  if (minima.size() > cfg.starts) minima.resize(std::max<std::size_t>(cfg.starts, 1));

  std::vector<Params> starts;
  starts.reserve(minima.size());
  for (auto& c : minima) starts.push_back(std::move(c.x));
  return starts;
}

Candidate refine(ModelKind kind, std::span<const FrequencyPoint> data, const Grid& grid,
                 const Params& start, const FitConfig& cfg) {
  const Bounds bounds = bounds_for(kind);
  const Objective objective = [&](std::span<const double> x) { return sse_of(kind, data, x); };
  const NelderMeadOptions options{cfg.max_iterations, cfg.simplex_tolerance};

  std::vector<double> steps = steps_at(grid, start);
  NelderMeadResult best = nelder_mead(objective, start, steps, bounds, options);
  // Restart from the optimum with a fresh, smaller simplex; a collapsed
  // simplex can stall short of the minimum.
  for (int r = 0; r < cfg.polish_restarts; ++r) {
    for (double& s : steps) s = std::max(s * 0.1, 1e-9);
    NelderMeadResult next = nelder_mead(objective, best.x, steps, bounds, options);
    const double gain = best.f - next.f;
    if (next.f <= best.f) best = std::move(next);
    if (gain <= cfg.simplex_tolerance) break;
  }
  return {best.x, best.f, best.converged};
}

void check_data(std::span<const FrequencyPoint> data, ModelKind kind) {
  const std::size_t needed = parameter_count(kind) + 1;
  if (data.size() < needed) {
    throw UsageError("fit_model: " + std::string(to_string(kind)) + " needs at least " +
                     std::to_string(needed) + " data points, got " + std::to_string(data.size()));
  }
  for (const auto& pt : data) {
    if (!(pt.p1_hat >= 0.0 && pt.p1_hat <= 1.0)) {
      throw UsageError("fit_model: p1_hat outside [0, 1] at m=" + std::to_string(pt.m));
    }
    if (!(pt.weight > 0.0) || !std::isfinite(pt.weight)) {
      throw UsageError("fit_model: weights must be positive and finite");
    }
  }
}

FitResult make_result(ModelKind kind, std::span<const FrequencyPoint> data, const Candidate& c) {
  FitResult res;
  res.model_kind = kind;
  res.theta_hat = c.x[0];
  switch (kind) {
    case ModelKind::gaussian:
      res.noise_params = GaussianNoiseParams{c.x[1], c.x[2]};
      break;
    case ModelKind::gaussian_zero_mean:
      res.noise_params = GaussianNoiseParams{0.0, c.x[1]};
      break;
    case ModelKind::depolarizing:
      res.noise_params = DepolParams{c.x[1]};
      break;
  }
  std::vector<double> observed;
  observed.reserve(data.size());
  res.sse = 0.0;
  for (const auto& pt : data) {
    const double pred = model_p1(kind, c.x[0], std::span<const double>(c.x).subspan(1), pt.m);
    const double r = std::sqrt(pt.weight) * (pt.p1_hat - pred);
    res.predicted.push_back(pred);
    res.residuals.push_back(r);
    res.sse += r * r;
    observed.push_back(pt.p1_hat);
  }
  res.r_squared = r_squared(observed, res.predicted);
  res.converged = c.converged;
  return res;
}

FitResult fit_impl(std::span<const FrequencyPoint> data, ModelKind kind, const FitConfig& cfg,
                   std::span<const Params> extra_starts) {
  check_data(data, kind);
  const Grid grid = make_grid(kind, cfg);
  std::vector<Params> starts = grid_starts(kind, data, grid, cfg);
  starts.insert(starts.end(), extra_starts.begin(), extra_starts.end());

  std::vector<std::optional<Candidate>> refined(starts.size());
  parallel_for(starts.size(), cfg.threads, [&](std::size_t i) {
    refined[i] = refine(kind, data, grid, starts[i], cfg);
  });

  // starts.front() is the best grid point and refinement never worsens a
  // start, so the winner is at least as good as every grid point.
  Candidate best = *refined.front();
  for (std::size_t i = 1; i < refined.size(); ++i) {
    if (better(kind, *refined[i], best)) best = *refined[i];
  }
  return make_result(kind, data, best);
}

}  // namespace

FitResult fit_model(std::span<const FrequencyPoint> data, ModelKind kind, const FitConfig& config) {
  if (kind != ModelKind::gaussian) {
    return fit_impl(data, kind, config, {});
  }
  const FitResult zero_mean = fit_model(data, ModelKind::gaussian_zero_mean, config);
  const auto& g = std::get<GaussianNoiseParams>(zero_mean.noise_params);
  const std::array<Params, 1> extra{Params{zero_mean.theta_hat, 0.0, g.k_sigma}};
  return fit_impl(data, kind, config, extra);
}

std::vector<FitResult> fit_all(std::span<const FrequencyPoint> data, const FitConfig& config) {
  FitResult zero_mean = fit_impl(data, ModelKind::gaussian_zero_mean, config, {});
  const auto& g = std::get<GaussianNoiseParams>(zero_mean.noise_params);
  const std::array<Params, 1> extra{Params{zero_mean.theta_hat, 0.0, g.k_sigma}};
  FitResult gaussian = fit_impl(data, ModelKind::gaussian, config, extra);
  FitResult depol = fit_impl(data, ModelKind::depolarizing, config, {});
  return {std::move(gaussian), std::move(zero_mean), std::move(depol)};
}

FitReport fit_report(std::span<const FitResult> results) {
  if (results.empty()) {
    throw UsageError("fit_report: no results");
  }
  std::map<std::string, FitReportRow> rows;
  for (const auto& r : results) {
    auto& row = rows[r.label];
    row.label = r.label;
    if (row.r_squared.contains(r.model_kind)) {
      throw UsageError("fit_report: duplicate " + std::string(to_string(r.model_kind)) +
                       " result for label '" + r.label + "'");
    }
    row.r_squared[r.model_kind] = r.r_squared;
  }
  FitReport report;
  for (auto& [label, row] : rows) {
    auto rounded = [](double v) { return std::llround(v * 1e4); };
    long long top = std::numeric_limits<long long>::min();
    for (const auto& [kind, r2] : row.r_squared) top = std::max(top, rounded(r2));
    for (const auto& [kind, r2] : row.r_squared) row.best[kind] = rounded(r2) == top;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace naqae
