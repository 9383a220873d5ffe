#pragma once

// Outcome probabilities of a QAE circuit after m Grover iterates under the
// Gaussian rotation-noise model and the depolarizing model.
//
// Gaussian model: the accumulated rotation error after m iterates is
// theta_eps ~ Normal(mean = k_mu * m, variance = k_sigma * m), and the
// measured qubit reads 1 with probability sin^2((2m+1) theta + theta_eps).
// Integrating out theta_eps gives
//
//   p(0) - p(1) = exp(-2 k_sigma m) cos(2((2m+1) theta + k_mu m)).
//
// Depolarizing model: p(1) = q^m sin^2((2m+1) theta) + (1 - q^m) / 2 with q
// the per-iterate coherence survival probability.

#include <cstdint>
#include <variant>

namespace naqae {

using GroverDepth = std::uint32_t;

// theta in [0, pi/2]; a = sin^2(theta) is the amplitude being estimated.
class Amplitude {
 public:
  explicit Amplitude(double theta);
  static Amplitude from_probability(double a);

  double theta() const noexcept { return theta_; }
  double a() const noexcept;

 private:
  double theta_;
};

struct GaussianNoiseParams {
  double k_mu = 0.0;     // rad per iterate
  double k_sigma = 0.0;  // rad^2 per iterate

  void validate() const;
};

struct DepolParams {
  double p_coh = 1.0;  // per-iterate coherence survival, in [0, 1]

  void validate() const;
};

struct Noiseless {};

using NoiseModel = std::variant<Noiseless, GaussianNoiseParams, DepolParams>;

// sin^2((2m+1) theta), the ideal outcome-1 probability.
double p1_noiseless(Amplitude amp, GroverDepth m);

double p1_gaussian_closed(Amplitude amp, GroverDepth m, const GaussianNoiseParams& noise);

// p(0) - p(1); magnitude bounded by exp(-2 k_sigma m).
double p_diff_gaussian_closed(Amplitude amp, GroverDepth m, const GaussianNoiseParams& noise);

double p1_depolarizing(Amplitude amp, GroverDepth m, const DepolParams& depol);

// Probability of outcome 1 for any of the supported models.
double p1(Amplitude amp, GroverDepth m, const NoiseModel& model);

// The depolarizing model reproducing the zero-mean Gaussian model exactly:
// p_coh = exp(-2 k_sigma). Throws DomainError if k_mu != 0.
DepolParams depol_equivalent(const GaussianNoiseParams& noise);

// Numerical-integration counterparts of the closed form (see quadrature.hpp
// for the integrator). `tol` bounds successive-estimate differences relative
// to max(1, |estimate|).
double p1_gaussian_quadrature(Amplitude amp, GroverDepth m, const GaussianNoiseParams& noise,
                              double tol = 1e-12);
double p0_gaussian_quadrature(Amplitude amp, GroverDepth m, const GaussianNoiseParams& noise,
                              double tol = 1e-12);

namespace detail {
// Accept values within 1e-12 of [0, 1] and clamp them; anything further out
// raises InternalConsistencyError.
double checked_probability(double p, const char* where);
}  // namespace detail

}  // namespace naqae
