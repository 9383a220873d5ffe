#pragma once

// Reference implementations written independently of the library code.
// They trade speed for transparency and are only used to cross-check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace naqae::testing {

// E[f(X)], X ~ Normal(mean, variance), by composite Simpson on mean +- 12 sd.
// Panel width is capped at 0.004 so oscillating integrands stay resolved.
template <typename F>
double simpson_gaussian_expectation(F f, double mean, double variance) {
  if (variance == 0.0) return f(mean);
  const double sd = std::sqrt(variance);
  const int panels = 2 * std::max(1000, static_cast<int>(std::ceil(12.0 * sd / 0.004)));
  const double lo = mean - 12.0 * sd;
  const double h = 24.0 * sd / panels;
  const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
  auto g = [&](double x) {
    const double z = (x - mean) / sd;
    return f(x) * norm * std::exp(-0.5 * z * z);
  };
  double sum = g(lo) + g(lo + panels * h);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * g(lo + i * h);
  return sum * h / 3.0;
}

// Outcome-1 probability by direct averaging over the rotation error.
inline double oracle_p1_gaussian(double theta, std::uint32_t m, double k_mu, double k_sigma) {
  const double angle = (2.0 * m + 1.0) * theta;
  return simpson_gaussian_expectation(
      [&](double e) {
        const double s = std::sin(angle + e);
        return s * s;
      },
      k_mu * m, k_sigma * m);
}

// Mixture form of the depolarizing channel: coherent with probability q^m,
// otherwise maximally mixed.
inline double oracle_p1_depol(double theta, std::uint32_t m, double q) {
  const double coherent = std::pow(q, static_cast<double>(m));
  const double s = std::sin((2.0 * m + 1.0) * theta);
  return coherent * s * s + (1.0 - coherent) * 0.5;
}

// Plain binomial log-likelihood of theta for one tally, no guards.
inline double oracle_log_likelihood(double theta, std::uint32_t m, double shots, double ones) {
  const double s = std::sin((2.0 * m + 1.0) * theta);
  const double p = s * s;
  return ones * std::log(p) + (shots - ones) * std::log(1.0 - p);
}

}  // namespace naqae::testing
