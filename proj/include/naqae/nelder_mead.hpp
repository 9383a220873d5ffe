#pragma once

#include <functional>
#include <span>
#include <vector>

namespace naqae {

struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  void project(std::span<double> x) const;
};

struct NelderMeadOptions {
  int max_iterations = 500;
  double f_tolerance = 1e-10;  // stop when max f - min f over the simplex <= this
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Derivative-free simplex minimization. Every trial point is projected into
// `bounds` before evaluation, so the returned point is always feasible and
// never worse than the projected start.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start,
                             std::span<const double> steps, const Bounds& bounds,
                             const NelderMeadOptions& options = {});

}  // namespace naqae
