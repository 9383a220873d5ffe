#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace naqae::quadrature {

// n-point Gauss-Hermite rule for  integral f(t) exp(-t^2) dt  over R.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes by Newton iteration on the orthonormal Hermite recurrence, weights
// from the derivative. Throws NumericFailure if a root does not converge.
GaussHermiteRule gauss_hermite_rule(std::size_t n);

// Cached rules for n = 8, 16, ..., kMaxHermiteNodes.
const GaussHermiteRule& cached_rule(std::size_t n);

inline constexpr std::size_t kMinHermiteNodes = 8;
inline constexpr std::size_t kMaxHermiteNodes = 256;
inline constexpr std::size_t kMaxTrapezoidNodes = 1u << 16;
inline constexpr double kTruncationSigmas = 8.0;

enum class Scheme { degenerate, gauss_hermite, trapezoid };

struct ExpectationResult {
  double value = 0.0;
  std::size_t nodes = 0;
  Scheme scheme = Scheme::degenerate;
};

// E[f(X)] for X ~ Normal(mean, variance).
//
// Gauss-Hermite in the standardized variable, doubling the node count until
// two successive estimates agree to tol * max(1, |estimate|). If the Hermite
// budget runs out, falls back to a trapezoid rule on mean +- 8 sd with the
// same doubling test. variance == 0 evaluates f(mean) directly. Throws
// NumericFailure when neither scheme converges, DomainError on variance < 0.
ExpectationResult gaussian_expectation(const std::function<double(double)>& f, double mean,
                                       double variance, double tol);

}  // namespace naqae::quadrature
