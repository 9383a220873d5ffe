#pragma once

// Monte Carlo comparison of four QAE settings on a simulated device using
// the linearly increasing depth sequence m = 0, 1, ..., max_depth:
//
//   noisy_a      naive estimation, flat N_m = n_shot_base
//   noisy_b      corrected estimation, flat N_m
//   noise_aware  corrected estimation, N_m = (4 k m + 1) n_shot_base
//   noiseless    naive estimation on the noise-free twin of the device
//
// where corrected estimation uses p_coh = exp(-2 k) and k is the assumed
// k_sigma. Each replication estimates the amplitude from every depth prefix.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "naqae/device_sim.hpp"
#include "naqae/estimation.hpp"

namespace naqae {

enum class Setting { noisy_a, noisy_b, noise_aware, noiseless };

std::string_view to_string(Setting s);
Setting parse_setting(std::string_view text);

struct ExperimentConfig {
  SimulatedDevice device;
  std::optional<double> truth_a;            // defaults to sin^2(device theta)
  GroverDepth max_depth = 12;
  std::uint64_t n_shot_base = 20;
  std::optional<double> k_sigma_assumed;    // defaults to the device's k_sigma
  std::vector<Setting> settings{Setting::noisy_a, Setting::noisy_b, Setting::noise_aware,
                                Setting::noiseless};
  std::size_t replications = 50;
  std::uint64_t seed = 0;                   // overrides device.seed
  EstimationGrid grid{};
  unsigned threads = 1;                     // 0 = hardware concurrency

  void validate() const;
  double truth() const;
  double assumed_k_sigma() const;
};

// k_sigma implied by the device's noise model: k_sigma for Gaussian noise,
// -ln(p_coh) / 2 for depolarizing noise, 0 when noiseless.
double device_k_sigma(const SimulatedDevice& dev);

// Shot schedule a setting uses.
ShotSchedule setting_schedule(const ExperimentConfig& config, Setting setting);

// One estimate per prefix M = 0..max_depth. Randomness comes from stream
// (replication_index, setting, depth index) under config.seed.
std::vector<AmplitudeEstimate> run_qae_trial(const ExperimentConfig& config, Setting setting,
                                             std::size_t replication_index);

struct RmsePoint {
  GroverDepth depth = 0;                // prefix M
  std::uint64_t oracle_queries = 0;     // sum over m <= M of (2m+1) N_m
  double rmse = 0.0;
};

struct RmseCurve {
  std::string setting;
  std::vector<RmsePoint> points;
};

// RMSE over replications of a_hat - truth at every prefix, per setting.
std::vector<RmseCurve> run_monte_carlo(const ExperimentConfig& config);

// Robustness study: noise_aware and noisy_b curves with the assumed k_sigma
// scaled by each factor; labels carry the factor, e.g. "noise_aware@x0.5".
std::vector<RmseCurve> run_misspecification_sweep(const ExperimentConfig& config,
                                                  const std::vector<double>& factors);

}  // namespace naqae
