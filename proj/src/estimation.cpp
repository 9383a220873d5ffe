#include "naqae/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "naqae/errors.hpp"

namespace naqae {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_k_sigma(double k_sigma, const char* where) {
  if (!(k_sigma >= 0.0) || !std::isfinite(k_sigma)) {
    throw DomainError(std::string(where) + ": k_sigma must be finite and >= 0");
  }
}

}  // namespace

ShotSchedule::ShotSchedule(std::vector<ScheduleEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].n_shots == 0) {
      throw UsageError("ShotSchedule: n_shots must be >= 1");
    }
    if (i > 0 && entries_[i].m <= entries_[i - 1].m) {
      throw UsageError("ShotSchedule: depths must be strictly increasing");
    }
  }
}

ShotSchedule ShotSchedule::flat(std::span<const GroverDepth> depths, std::uint64_t n_shots) {
  std::vector<ScheduleEntry> entries;
  entries.reserve(depths.size());
  for (const GroverDepth m : depths) entries.push_back({m, n_shots});
  return ShotSchedule(std::move(entries));
}

std::vector<GroverDepth> ShotSchedule::depths() const {
  std::vector<GroverDepth> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.m);
  return out;
}

std::vector<std::uint64_t> ShotSchedule::shots() const {
  std::vector<std::uint64_t> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.n_shots);
  return out;
}

Rounding parse_rounding(std::string_view text) {
  if (text == "nearest") return Rounding::nearest;
  if (text == "up") return Rounding::up;
  throw UsageError("unknown rounding '" + std::string(text) + "' (expected nearest|up)");
}

double binomial_std_bound(std::uint64_t shots) {
  if (shots == 0) {
    throw UsageError("binomial_std_bound: shots must be >= 1");
  }
  return std::sqrt(1.0 / (4.0 * static_cast<double>(shots)));
}

VarianceBound worst_case_variance(GroverDepth m, std::uint64_t n_shots, double k_sigma) {
  if (n_shots == 0) {
    throw UsageError("worst_case_variance: n_shots must be >= 1");
  }
  check_k_sigma(k_sigma, "worst_case_variance");
  const double n = static_cast<double>(n_shots);
  VarianceBound v;
  v.sigma2 = k_sigma * static_cast<double>(m);
  v.sigma2_tilde = 1.0 / (4.0 * n);
  v.total = v.sigma2 / n + v.sigma2_tilde;
  return v;
}

ShotSchedule shot_schedule(std::span<const GroverDepth> depths, std::uint64_t n_shot_base,
                           double k_sigma, Rounding rounding) {
  if (n_shot_base == 0) {
    throw UsageError("shot_schedule: n_shot_base must be >= 1");
  }
  check_k_sigma(k_sigma, "shot_schedule");
  std::vector<ScheduleEntry> entries;
  entries.reserve(depths.size());
  for (const GroverDepth m : depths) {
    double exact = (4.0 * k_sigma * static_cast<double>(m) + 1.0) * static_cast<double>(n_shot_base);
    if (!(exact < 0x1.0p63)) {
      throw UsageError("shot_schedule: shot count overflows at m=" + std::to_string(m));
    }
    const double nearest_int = std::nearbyint(exact);
    if (std::abs(exact - nearest_int) <= 1e-9) exact = nearest_int;
    const double n = rounding == Rounding::up ? std::ceil(exact) : std::floor(exact + 0.5);
    entries.push_back({m, static_cast<std::uint64_t>(n)});
  }
  return ShotSchedule(std::move(entries));
}

double correct_frequency(double p1_hat, GroverDepth m, const DepolParams& depol) {
  depol.validate();
  if (depol.p_coh == 0.0) {
    throw SingularCorrectionError("correct_counts: p_coh == 0 leaves no signal to correct");
  }
  const double coherent = std::pow(depol.p_coh, static_cast<double>(m));
  if (coherent == 0.0) {
    throw SingularCorrectionError("correct_counts: p_coh^m underflows at m=" + std::to_string(m));
  }
  return (p1_hat - 0.5 * (1.0 - coherent)) / coherent;
}

CorrectedCount correct_counts(const ShotRecord& record, const DepolParams& depol) {
  record.validate();
  const double shots = static_cast<double>(record.shots);
  CorrectedCount c;
  c.raw = correct_frequency(record.frequency(), record.m, depol) * shots;
  c.ones = std::clamp(c.raw, 0.0, shots);
  c.clamped = c.ones != c.raw;
  return c;
}

std::string_view to_string(EstimationMethod::Kind kind) {
  return kind == EstimationMethod::Kind::naive ? "naive" : "corrected";
}

LikelihoodAccumulator::LikelihoodAccumulator(EstimationMethod method, EstimationGrid grid)
    : method_(method), grid_(grid) {
  if (grid_.points < 2) {
    throw UsageError("EstimationGrid: need at least 2 grid points");
  }
  if (!(grid_.probability_guard > 0.0 && grid_.probability_guard < 0.5)) {
    throw UsageError("EstimationGrid: probability guard must lie in (0, 0.5)");
  }
  if (method_.kind == EstimationMethod::Kind::corrected) {
    method_.depol.validate();
    if (method_.depol.p_coh == 0.0) {
      throw SingularCorrectionError("corrected estimation requires p_coh > 0");
    }
  }
  thetas_.resize(grid_.points);
  for (std::size_t i = 0; i < grid_.points; ++i) {
    thetas_[i] = kHalfPi * static_cast<double>(i) / static_cast<double>(grid_.points - 1);
  }
  values_.assign(grid_.points, 0.0);
}

void LikelihoodAccumulator::add(const ShotRecord& record) {
  record.validate();
  double ones = static_cast<double>(record.ones);
  if (method_.kind == EstimationMethod::Kind::corrected) {
    const double coherent = std::pow(method_.depol.p_coh, static_cast<double>(record.m));
    if (coherent == 0.0) {
      ++dropped_;
      return;
    }
    const CorrectedCount c = correct_counts(record, method_.depol);
    ones = c.ones;
    if (c.clamped) ++clamped_;
  }
  const Term term{2.0 * static_cast<double>(record.m) + 1.0, ones,
                  static_cast<double>(record.shots) - ones};
  terms_.push_back(term);

  const double lo = grid_.probability_guard;
  const double hi = 1.0 - grid_.probability_guard;
  for (std::size_t i = 0; i < thetas_.size(); ++i) {
    const double s = std::sin(term.m_factor * thetas_[i]);
    const double p = std::clamp(s * s, lo, hi);
    values_[i] += term.ones * std::log(p) + term.zeros * std::log1p(-p);
  }
}

double LikelihoodAccumulator::log_likelihood(double theta) const {
  const double lo = grid_.probability_guard;
  const double hi = 1.0 - grid_.probability_guard;
  double total = 0.0;
  for (const auto& t : terms_) {
    const double s = std::sin(t.m_factor * theta);
    const double p = std::clamp(s * s, lo, hi);
    total += t.ones * std::log(p) + t.zeros * std::log1p(-p);
  }
  return total;
}

AmplitudeEstimate LikelihoodAccumulator::maximize() const {
  std::size_t best = 0;
  double lowest = values_[0];
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] > values_[best]) best = i;
    lowest = std::min(lowest, values_[i]);
  }

  AmplitudeEstimate est;
  est.method = method_.kind;
  est.clamped_records = clamped_;
  est.dropped_records = dropped_;
  est.flat_likelihood = values_[best] - lowest <= grid_.flat_tolerance;
  est.theta_hat = thetas_[best];
  est.log_likelihood = values_[best];

  if (!est.flat_likelihood) {
    // Golden-section search on the bracket around the best grid point.
    double a = thetas_[best == 0 ? 0 : best - 1];
    double b = thetas_[std::min(best + 1, thetas_.size() - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = log_likelihood(c);
    double fd = log_likelihood(d);
    while (b - a > grid_.refine_tolerance) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = log_likelihood(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = log_likelihood(d);
      }
    }
    const double refined = std::clamp(0.5 * (a + b), 0.0, kHalfPi);
    const double refined_value = log_likelihood(refined);
    // Only a strict improvement replaces the grid point.
    if (refined_value > est.log_likelihood) {
      est.theta_hat = refined;
      est.log_likelihood = refined_value;
    }
  }
  const double s = std::sin(est.theta_hat);
  est.a_hat = s * s;
  return est;
}

AmplitudeEstimate estimate_amplitude(std::span<const ShotRecord> records,
                                     const EstimationMethod& method, const EstimationGrid& grid) {
  if (records.empty()) {
    throw UsageError("estimate_amplitude: no records");
  }
  LikelihoodAccumulator acc(method, grid);
  for (const auto& r : records) acc.add(r);
  return acc.maximize();
}

}  // namespace naqae
