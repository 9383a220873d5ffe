#include "naqae/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "naqae/errors.hpp"

namespace naqae::quadrature {

GaussHermiteRule gauss_hermite_rule(std::size_t n) {
  if (n == 0) {
    throw UsageError("gauss_hermite_rule: n must be positive");
  }
  constexpr double kEps = 1e-15;
  constexpr int kMaxIter = 200;
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);

  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);

  const std::size_t half = (n + 1) / 2;
  const double nd = static_cast<double>(n);
  double z = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    // Initial guesses for the largest roots first, then extrapolate inward.
    if (i == 0) {
      z = std::sqrt(2.0 * nd + 1.0) - 1.85575 * std::pow(2.0 * nd + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(nd, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }

    double derivative = 0.0;
    bool converged = false;
    for (int iter = 0; iter < kMaxIter; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
      }
      derivative = std::sqrt(2.0 * nd) * p2;
      const double z_prev = z;
      z = z_prev - p1 / derivative;
      if (std::abs(z - z_prev) <= kEps * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NumericFailure("gauss_hermite_rule: root " + std::to_string(i) + " of " +
                           std::to_string(n) + " did not converge");
    }
    const double w = 2.0 / (derivative * derivative);
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

namespace {

constexpr std::size_t kRuleCount = 6;  // 8 .. 256

const std::array<GaussHermiteRule, kRuleCount>& all_rules() {
  static const std::array<GaussHermiteRule, kRuleCount> rules = [] {
    std::array<GaussHermiteRule, kRuleCount> r;
    std::size_t n = kMinHermiteNodes;
    for (auto& rule : r) {
      rule = gauss_hermite_rule(n);
      n *= 2;
    }
    return r;
  }();
  return rules;
}

bool agree(double current, double previous, double tol) {
  return std::abs(current - previous) <= tol * std::max(1.0, std::abs(current));
}

}  // namespace

const GaussHermiteRule& cached_rule(std::size_t n) {
  std::size_t size = kMinHermiteNodes;
  for (const auto& rule : all_rules()) {
    if (size == n) {
      return rule;
    }
    size *= 2;
  }
  throw UsageError("cached_rule: no cached Gauss-Hermite rule with " + std::to_string(n) +
                   " nodes");
}

ExpectationResult gaussian_expectation(const std::function<double(double)>& f, double mean,
                                       double variance, double tol) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw DomainError("gaussian_expectation: variance must be finite and >= 0");
  }
  if (!(tol > 0.0)) {
    throw UsageError("gaussian_expectation: tolerance must be positive");
  }
  if (variance == 0.0) {
    return {f(mean), 1, Scheme::degenerate};
  }

  // x = mean + sqrt(2 variance) t turns the normal density into exp(-t^2)/sqrt(pi).
  const double scale = std::sqrt(2.0 * variance);
  const double norm = 1.0 / std::sqrt(std::numbers::pi);
  double previous = std::nan("");
  for (const auto& rule : all_rules()) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum += rule.weights[i] * f(mean + scale * rule.nodes[i]);
    }
    const double estimate = sum * norm;
    if (std::isfinite(previous) && agree(estimate, previous, tol)) {
      return {estimate, rule.nodes.size(), Scheme::gauss_hermite};
    }
    previous = estimate;
  }

  // Trapezoid on the truncated support; each refinement halves the spacing
  // and reuses the previous sum.
  const double sd = std::sqrt(variance);
  const double lo = mean - kTruncationSigmas * sd;
  const double hi = mean + kTruncationSigmas * sd;
  const double density_norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
  auto weighted = [&](double x) {
    const double z = (x - mean) / sd;
    return f(x) * density_norm * std::exp(-0.5 * z * z);
  };

  std::size_t intervals = 64;
  double h = (hi - lo) / static_cast<double>(intervals);
  double sum = 0.5 * (weighted(lo) + weighted(hi));
  for (std::size_t i = 1; i < intervals; ++i) {
    sum += weighted(lo + h * static_cast<double>(i));
  }
  previous = sum * h;
  while (intervals < kMaxTrapezoidNodes) {
    for (std::size_t i = 0; i < intervals; ++i) {
      sum += weighted(lo + h * (static_cast<double>(i) + 0.5));
    }
    intervals *= 2;
    h *= 0.5;
    const double estimate = sum * h;
    if (agree(estimate, previous, tol)) {
      return {estimate, intervals + 1, Scheme::trapezoid};
    }
    previous = estimate;
  }
  throw NumericFailure("gaussian_expectation: no convergence within " +
                       std::to_string(kMaxTrapezoidNodes) + " nodes");
}

}  // namespace naqae::quadrature
