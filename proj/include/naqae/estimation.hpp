#pragma once

// Amplitude estimation from multi-depth shot data, depolarizing count
// correction and the noise-aware shot schedule N_m = (4 k_sigma m + 1) N_shot.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "naqae/device_sim.hpp"
#include "naqae/noise_models.hpp"

namespace naqae {

struct ScheduleEntry {
  GroverDepth m = 0;
  std::uint64_t n_shots = 1;

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

// Depths strictly increasing, every n_shots >= 1.
class ShotSchedule {
 public:
  ShotSchedule() = default;
  explicit ShotSchedule(std::vector<ScheduleEntry> entries);

  // Same shot count at every depth.
  static ShotSchedule flat(std::span<const GroverDepth> depths, std::uint64_t n_shots);

  const std::vector<ScheduleEntry>& entries() const noexcept { return entries_; }
  std::vector<GroverDepth> depths() const;
  std::vector<std::uint64_t> shots() const;

 private:
  std::vector<ScheduleEntry> entries_;
};

enum class Rounding {
  nearest,  // half-up
  up,
};

Rounding parse_rounding(std::string_view text);

// sqrt(1 / (4 shots)): the largest standard deviation of a shot average.
double binomial_std_bound(std::uint64_t shots);

struct VarianceBound {
  double sigma2 = 0.0;        // rotation-noise bound, k_sigma * m
  double sigma2_tilde = 0.0;  // binomial bound, 1 / (4 N_m)
  double total = 0.0;         // sigma2 / N_m + sigma2_tilde = (4 k_sigma m + 1) / (4 N_m)
};

VarianceBound worst_case_variance(GroverDepth m, std::uint64_t n_shots, double k_sigma);

// N_m = round((4 k_sigma m + 1) n_shot_base). Products within 1e-9 of an
// integer are snapped to it before rounding.
ShotSchedule shot_schedule(std::span<const GroverDepth> depths, std::uint64_t n_shot_base,
                           double k_sigma, Rounding rounding = Rounding::nearest);

struct CorrectedCount {
  double ones = 0.0;      // clamped to [0, shots]
  double raw = 0.0;       // before clamping
  bool clamped = false;
};

// Frequency form of the correction, (p1_hat - (1 - q^m) / 2) / q^m, before
// any clamping. Inverts p1_depolarizing. Same errors as correct_counts.
double correct_frequency(double p1_hat, GroverDepth m, const DepolParams& depol);

// Projects a depolarized tally onto the noiseless one:
//   (N1 - N (1 - q^m) / 2) / q^m.
// Throws SingularCorrectionError when q == 0 or q^m underflows.
CorrectedCount correct_counts(const ShotRecord& record, const DepolParams& depol);

struct EstimationMethod {
  enum class Kind { naive, corrected };
  Kind kind = Kind::naive;
  DepolParams depol{1.0};

  static EstimationMethod naive() { return {}; }
  static EstimationMethod corrected(DepolParams depol) { return {Kind::corrected, depol}; }
};

std::string_view to_string(EstimationMethod::Kind kind);

struct EstimationGrid {
  std::size_t points = 10000;         // uniform over [0, pi/2]
  double refine_tolerance = 1e-10;    // golden-section bracket width
  double probability_guard = 1e-12;   // p clamped to [guard, 1 - guard] inside logs
  double flat_tolerance = 1e-9;       // max - min log-likelihood below this => flat
};

struct AmplitudeEstimate {
  double theta_hat = 0.0;
  double a_hat = 0.0;
  double log_likelihood = 0.0;
  EstimationMethod::Kind method = EstimationMethod::Kind::naive;
  std::size_t clamped_records = 0;  // corrected counts pushed back into [0, N]
  std::size_t dropped_records = 0;  // q^m underflowed; record carries no signal
  bool flat_likelihood = false;
};

// Maximizes sum_m h_m ln p_m(theta) + (N_m - h_m) ln(1 - p_m(theta)) with
// p_m(theta) = sin^2((2m+1) theta) over a uniform grid, then golden-section
// refinement around the best grid point. Ties resolve to the smallest theta.
// The corrected method substitutes fractional corrected counts for h_m.
AmplitudeEstimate estimate_amplitude(std::span<const ShotRecord> records,
                                     const EstimationMethod& method,
                                     const EstimationGrid& grid = {});

// Incremental form: add records one at a time and maximize at any point.
// Used to estimate every prefix of a depth sequence in one pass.
class LikelihoodAccumulator {
 public:
  explicit LikelihoodAccumulator(EstimationMethod method, EstimationGrid grid = {});

  void add(const ShotRecord& record);
  AmplitudeEstimate maximize() const;

 private:
  struct Term {
    double m_factor;  // 2m + 1
    double ones;
    double zeros;
  };

  double log_likelihood(double theta) const;

  EstimationMethod method_;
  EstimationGrid grid_;
  std::vector<double> thetas_;
  std::vector<double> values_;
  std::vector<Term> terms_;
  std::size_t clamped_ = 0;
  std::size_t dropped_ = 0;
};

}  // namespace naqae
