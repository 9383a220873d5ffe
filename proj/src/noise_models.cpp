#include "naqae/noise_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "naqae/errors.hpp"
#include "naqae/quadrature.hpp"

namespace naqae {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kRoundOffSlack = 1e-12;

double rotation_angle(Amplitude amp, GroverDepth m) {
  return (2.0 * static_cast<double>(m) + 1.0) * amp.theta();
}

double square(double x) { return x * x; }

}  // namespace

namespace detail {

double checked_probability(double p, const char* where) {
  if (!(p >= -kRoundOffSlack && p <= 1.0 + kRoundOffSlack)) {
    throw InternalConsistencyError(std::string(where) + ": probability " + std::to_string(p) +
                                   " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace detail

Amplitude::Amplitude(double theta) : theta_(theta) {
  if (!(theta >= 0.0 && theta <= kHalfPi)) {
    throw DomainError("Amplitude: theta must lie in [0, pi/2], got " + std::to_string(theta));
  }
}

Amplitude Amplitude::from_probability(double a) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw DomainError("Amplitude: a must lie in [0, 1], got " + std::to_string(a));
  }
  return Amplitude(std::asin(std::sqrt(a)));
}

double Amplitude::a() const noexcept { return square(std::sin(theta_)); }

void GaussianNoiseParams::validate() const {
  if (!std::isfinite(k_mu)) {
    throw DomainError("GaussianNoiseParams: k_mu must be finite");
  }
  if (!(k_sigma >= 0.0) || !std::isfinite(k_sigma)) {
    throw DomainError("GaussianNoiseParams: k_sigma must be finite and >= 0");
  }
}

void DepolParams::validate() const {
  if (!(p_coh >= 0.0 && p_coh <= 1.0)) {
    throw DomainError("DepolParams: p_coh must lie in [0, 1]");
  }
}

double p1_noiseless(Amplitude amp, GroverDepth m) {
  return square(std::sin(rotation_angle(amp, m)));
}

double p_diff_gaussian_closed(Amplitude amp, GroverDepth m, const GaussianNoiseParams& noise) {
  noise.validate();
  if (m == 0) {
    // No iterate, no error: the prepared state's own populations.
    const double c = std::cos(amp.theta());
    const double s = std::sin(amp.theta());
    return c * c - s * s;
  }
  const double md = static_cast<double>(m);
  const double decay = std::exp(-2.0 * noise.k_sigma * md);
  return decay * std::cos(2.0 * (rotation_angle(amp, m) + noise.k_mu * md));
}

double p1_gaussian_closed(Amplitude amp, GroverDepth m, const GaussianNoiseParams& noise) {
  const double p = 0.5 * (1.0 - p_diff_gaussian_closed(amp, m, noise));
  return detail::checked_probability(p, "p1_gaussian_closed");
}

double p1_depolarizing(Amplitude amp, GroverDepth m, const DepolParams& depol) {
  depol.validate();
  const double coherent = std::pow(depol.p_coh, static_cast<double>(m));
  const double p = coherent * p1_noiseless(amp, m) + 0.5 * (1.0 - coherent);
  return detail::checked_probability(p, "p1_depolarizing");
}

double p1(Amplitude amp, GroverDepth m, const NoiseModel& model) {
  struct Visitor {
    Amplitude amp;
    GroverDepth m;
    double operator()(const Noiseless&) const { return p1_noiseless(amp, m); }
    double operator()(const GaussianNoiseParams& g) const { return p1_gaussian_closed(amp, m, g); }
    double operator()(const DepolParams& d) const { return p1_depolarizing(amp, m, d); }
  };
  return std::visit(Visitor{amp, m}, model);
}

DepolParams depol_equivalent(const GaussianNoiseParams& noise) {
  noise.validate();
  if (noise.k_mu != 0.0) {
    throw DomainError("depol_equivalent: only defined for zero-mean Gaussian noise");
  }
  return DepolParams{std::exp(-2.0 * noise.k_sigma)};
}

namespace {

// Integrates the outcome probability against Normal(k_mu m, k_sigma m)
// without using the closed form.
double outcome_quadrature(Amplitude amp, GroverDepth m, const GaussianNoiseParams& noise,
                          double tol, bool outcome_one) {
  noise.validate();
  const double md = static_cast<double>(m);
  const double angle = rotation_angle(amp, m);
  auto integrand = [angle, outcome_one](double eps) {
    const double s = outcome_one ? std::sin(angle + eps) : std::cos(angle + eps);
    return s * s;
  };
  const auto result =
      quadrature::gaussian_expectation(integrand, noise.k_mu * md, noise.k_sigma * md, tol);
  return detail::checked_probability(result.value, "gaussian quadrature");
}

}  // namespace

double p1_gaussian_quadrature(Amplitude amp, GroverDepth m, const GaussianNoiseParams& noise,
                              double tol) {
  return outcome_quadrature(amp, m, noise, tol, true);
}

double p0_gaussian_quadrature(Amplitude amp, GroverDepth m, const GaussianNoiseParams& noise,
                              double tol) {
  return outcome_quadrature(amp, m, noise, tol, false);
}

}  // namespace naqae
