#include "naqae/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "naqae/errors.hpp"

namespace naqae {

void Bounds::project(std::span<double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::clamp(x[i], lower[i], upper[i]);
  }
}

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start,
                             std::span<const double> steps, const Bounds& bounds,
                             const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  if (n == 0 || steps.size() != n || bounds.lower.size() != n || bounds.upper.size() != n) {
    throw UsageError("nelder_mead: dimension mismatch");
  }

  auto evaluate = [&](std::vector<double> x) {
    bounds.project(x);
    const double value = f(x);
    return Vertex{std::move(x), value};
  };

  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back(evaluate(start));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = simplex.front().x;
    // Step away from the nearer bound so the vertex stays distinct.
    const double up = x[i] + steps[i];
    x[i] = up <= bounds.upper[i] ? up : x[i] - steps[i];
    simplex.push_back(evaluate(std::move(x)));
  }

  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };

  NelderMeadResult result;
  order();
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (simplex.back().f - simplex.front().f <= options.f_tolerance) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    const Vertex& worst = simplex.back();
    auto along = [&](double coeff) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + coeff * (centroid[i] - worst.x[i]);
      return evaluate(std::move(x));
    };

    Vertex reflected = along(kReflect);
    if (reflected.f < simplex.front().f) {
      Vertex expanded = along(kExpand);
      simplex.back() = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
    } else if (reflected.f < simplex[n - 1].f) {
      simplex.back() = std::move(reflected);
    } else {
      const bool outside = reflected.f < worst.f;
      Vertex contracted = along(outside ? kContract : -kContract);
      if (contracted.f < std::min(reflected.f, worst.f)) {
        simplex.back() = std::move(contracted);
      } else {
        for (std::size_t v = 1; v <= n; ++v) {
          std::vector<double> x(n);
          for (std::size_t i = 0; i < n; ++i) {
            x[i] = simplex.front().x[i] + kShrink * (simplex[v].x[i] - simplex.front().x[i]);
          }
          simplex[v] = evaluate(std::move(x));
        }
      }
    }
    order();
  }
  if (!result.converged && simplex.back().f - simplex.front().f <= options.f_tolerance) {
    result.converged = true;
  }
  result.x = simplex.front().x;
  result.f = simplex.front().f;
  result.iterations = iter;
  return result;
}

}  // namespace naqae
