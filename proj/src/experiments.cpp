#include "naqae/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "naqae/errors.hpp"
#include "naqae/parallel.hpp"
#include "naqae/random.hpp"

namespace naqae {

std::string_view to_string(Setting s) {
  switch (s) {
    case Setting::noisy_a:
      return "noisy_a";
    case Setting::noisy_b:
      return "noisy_b";
    case Setting::noise_aware:
      return "noise_aware";
    case Setting::noiseless:
      return "noiseless";
  }
  return "unknown";
}

Setting parse_setting(std::string_view text) {
  if (text == "noisy_a") return Setting::noisy_a;
  if (text == "noisy_b") return Setting::noisy_b;
  if (text == "noise_aware") return Setting::noise_aware;
  if (text == "noiseless") return Setting::noiseless;
  throw UsageError("unknown setting '" + std::string(text) + "'");
}

double device_k_sigma(const SimulatedDevice& dev) {
  if (const auto* g = std::get_if<GaussianNoiseParams>(&dev.model)) return g->k_sigma;
  if (const auto* d = std::get_if<DepolParams>(&dev.model)) {
    return d->p_coh > 0.0 ? -0.5 * std::log(d->p_coh) : INFINITY;
  }
  return 0.0;
}

void ExperimentConfig::validate() const {
  if (replications == 0) throw UsageError("ExperimentConfig: replications must be >= 1");
  if (n_shot_base == 0) throw UsageError("ExperimentConfig: n_shot_base must be >= 1");
  if (settings.empty()) throw UsageError("ExperimentConfig: no settings requested");
  if (truth_a && !(*truth_a >= 0.0 && *truth_a <= 1.0)) {
    throw UsageError("ExperimentConfig: truth_a must lie in [0, 1]");
  }
  const double k = assumed_k_sigma();
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw UsageError("ExperimentConfig: assumed k_sigma must be finite and >= 0");
  }
}

double ExperimentConfig::truth() const { return truth_a ? *truth_a : device.amp.a(); }

double ExperimentConfig::assumed_k_sigma() const {
  return k_sigma_assumed ? *k_sigma_assumed : device_k_sigma(device);
}

ShotSchedule setting_schedule(const ExperimentConfig& config, Setting setting) {
  std::vector<GroverDepth> depths(static_cast<std::size_t>(config.max_depth) + 1);
  std::iota(depths.begin(), depths.end(), GroverDepth{0});
  if (setting == Setting::noise_aware) {
    return shot_schedule(depths, config.n_shot_base, config.assumed_k_sigma(), Rounding::nearest);
  }
  return ShotSchedule::flat(depths, config.n_shot_base);
}

namespace {

EstimationMethod method_for(const ExperimentConfig& config, Setting setting) {
  if (setting == Setting::noisy_b || setting == Setting::noise_aware) {
    return EstimationMethod::corrected(depol_equivalent({0.0, config.assumed_k_sigma()}));
  }
  return EstimationMethod::naive();
}

}  // namespace

std::vector<AmplitudeEstimate> run_qae_trial(const ExperimentConfig& config, Setting setting,
                                             std::size_t replication_index) {
  config.validate();
  SimulatedDevice dev = config.device;
  dev.seed = config.seed;
  if (setting == Setting::noiseless) dev.model = Noiseless{};

  const ShotSchedule schedule = setting_schedule(config, setting);
  const auto depths = schedule.depths();
  const auto shots = schedule.shots();
  const std::uint64_t base_stream =
      derive_stream({replication_index, static_cast<std::uint64_t>(setting)});
  const auto records = run_depth_sweep(dev, depths, shots, base_stream);

  LikelihoodAccumulator acc(method_for(config, setting), config.grid);
  std::vector<AmplitudeEstimate> estimates;
  estimates.reserve(records.size());
  for (std::size_t prefix = 0; prefix < records.size(); ++prefix) {
    try {
      acc.add(records[prefix]);
      estimates.push_back(acc.maximize());
    } catch (const Error& e) {
      throw Error("setting " + std::string(to_string(setting)) + ", prefix M=" +
                  std::to_string(prefix) + ": " + e.what());
    }
  }
  return estimates;
}

std::vector<RmseCurve> run_monte_carlo(const ExperimentConfig& config) {
  config.validate();
  const double truth = config.truth();
  const std::size_t prefixes = static_cast<std::size_t>(config.max_depth) + 1;

  std::vector<RmseCurve> curves;
  for (const Setting setting : config.settings) {
    std::vector<std::vector<AmplitudeEstimate>> trials(config.replications);
    parallel_for(config.replications, config.threads,
                 [&](std::size_t rep) { trials[rep] = run_qae_trial(config, setting, rep); });

    const ShotSchedule schedule = setting_schedule(config, setting);
    RmseCurve curve;
    curve.setting = std::string(to_string(setting));
    std::uint64_t queries = 0;
    for (std::size_t M = 0; M < prefixes; ++M) {
      const auto& entry = schedule.entries()[M];
      queries += (2 * static_cast<std::uint64_t>(entry.m) + 1) * entry.n_shots;
      double sum_sq = 0.0;
      for (const auto& trial : trials) {
        const double err = trial[M].a_hat - truth;
        sum_sq += err * err;
      }
      curve.points.push_back({entry.m, queries,
                              std::sqrt(sum_sq / static_cast<double>(config.replications))});
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::vector<RmseCurve> run_misspecification_sweep(const ExperimentConfig& config,
                                                  const std::vector<double>& factors) {
  std::vector<RmseCurve> curves;
  for (const double factor : factors) {
    if (!(factor >= 0.0) || !std::isfinite(factor)) {
      throw UsageError("misspecification factor must be finite and >= 0");
    }
    ExperimentConfig scaled = config;
    scaled.k_sigma_assumed = config.assumed_k_sigma() * factor;
    scaled.settings = {Setting::noisy_b, Setting::noise_aware};
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "@x%g", factor);
    for (auto& curve : run_monte_carlo(scaled)) {
      curve.setting += suffix;
      curves.push_back(std::move(curve));
    }
  }
  return curves;
}

}  // namespace naqae
