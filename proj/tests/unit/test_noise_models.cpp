#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "naqae/errors.hpp"
#include "naqae/noise_models.hpp"
#include "oracles.hpp"
#include "property.hpp"

namespace naqae {
namespace {

using std::numbers::pi;
using testing::for_all;
using testing::Gen;

// Frozen outputs of a 30-digit adaptive quadrature of the defining integral.
constexpr double kP1PiOver6M1Sigma01 = 0.909365376538990929;
constexpr double kP1Theta1M10 = 0.503155823299720821;
constexpr double kPDiffPiOver6M3 = 0.331271622286711425;

TEST(Amplitude, RejectsAnglesOutsideQuarterTurn) {
  EXPECT_THROW(Amplitude(-1e-3), DomainError);
  EXPECT_THROW(Amplitude(pi / 2 + 1e-6), DomainError);
  EXPECT_THROW(Amplitude(std::nan("")), DomainError);
  EXPECT_DOUBLE_EQ(Amplitude(pi / 6).a(), 0.25);
}

TEST(Amplitude, FromProbabilityInvertsA) {
  for (double a : {0.0, 0.1, 0.25, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(Amplitude::from_probability(a).a(), a, 1e-15);
  }
  EXPECT_THROW(Amplitude::from_probability(1.5), DomainError);
}

TEST(NoiseParams, Validation) {
  EXPECT_THROW((GaussianNoiseParams{0.0, -0.1}.validate()), DomainError);
  EXPECT_THROW((DepolParams{1.5}.validate()), DomainError);
  EXPECT_NO_THROW((DepolParams{0.0}.validate()));
}

TEST(GaussianClosed, NoiselessZeroDepth) {
  EXPECT_NEAR(p1_gaussian_closed(Amplitude(pi / 6), 0, {0.0, 0.0}), 0.25, 1e-15);
}

TEST(GaussianClosed, OneIterateRotatesToCertainty) {
  EXPECT_NEAR(p1_gaussian_closed(Amplitude(pi / 6), 1, {0.0, 0.0}), 1.0, 1e-15);
}

TEST(GaussianClosed, MatchesFrozenIntegral) {
  EXPECT_NEAR(p1_gaussian_closed(Amplitude(pi / 6), 1, {0.0, 0.1}), kP1PiOver6M1Sigma01, 1e-14);
  EXPECT_NEAR(p1_gaussian_closed(Amplitude(1.0), 10, {0.02, 0.03}), kP1Theta1M10, 1e-14);
  EXPECT_NEAR(p_diff_gaussian_closed(Amplitude(pi / 6), 3, {0.01, 0.05}), kPDiffPiOver6M3,
              1e-14);
}

TEST(GaussianClosed, SimpsonOracleReproducesFrozenValues) {
  EXPECT_NEAR(testing::oracle_p1_gaussian(pi / 6, 1, 0.0, 0.1), kP1PiOver6M1Sigma01, 1e-11);
  EXPECT_NEAR(testing::oracle_p1_gaussian(1.0, 10, 0.02, 0.03), kP1Theta1M10, 1e-11);
}

TEST(PDiff, ZeroDepthAndEqualSuperposition) {
  EXPECT_NEAR(p_diff_gaussian_closed(Amplitude(pi / 6), 0, {0.3, 0.7}), 0.5, 1e-15);
  EXPECT_NEAR(p_diff_gaussian_closed(Amplitude(pi / 4), 0, {0.0, 0.0}), 0.0, 1e-15);
}

TEST(Quadrature, DegenerateVarianceReturnsNoiselessValue) {
  EXPECT_NEAR(p1_gaussian_quadrature(Amplitude(pi / 6), 0, {0.0, 0.1}), 0.25, 1e-15);
}

TEST(Quadrature, MatchesFrozenIntegral) {
  EXPECT_NEAR(p1_gaussian_quadrature(Amplitude(pi / 6), 1, {0.0, 0.1}), kP1PiOver6M1Sigma01,
              1e-12);
  EXPECT_NEAR(p1_gaussian_quadrature(Amplitude(1.0), 10, {0.02, 0.03}), kP1Theta1M10, 1e-12);
}

TEST(Depolarizing, Examples) {
  EXPECT_NEAR(p1_depolarizing(Amplitude(pi / 6), 2, {0.9}), 0.2975, 1e-15);
  EXPECT_NEAR(p1_depolarizing(Amplitude(pi / 6), 1, {1.0}), 1.0, 1e-15);
  EXPECT_NEAR(p1_depolarizing(Amplitude(0.3), 5000, {0.9}), 0.5, 1e-15);
}

TEST(DepolEquivalent, Examples) {
  EXPECT_EQ(depol_equivalent({0.0, 0.0}).p_coh, 1.0);
  EXPECT_NEAR(depol_equivalent({0.0, 0.1}).p_coh, 0.818730753077981859, 1e-15);
  EXPECT_NEAR(depol_equivalent({0.0, 0.055}).p_coh, 0.895834135296528251, 1e-15);
  EXPECT_THROW(depol_equivalent({0.01, 0.1}), DomainError);
}

TEST(NoiseModel, VariantDispatch) {
  const Amplitude amp(0.4);
  EXPECT_EQ(p1(amp, 3, Noiseless{}), p1_noiseless(amp, 3));
  EXPECT_EQ(p1(amp, 3, GaussianNoiseParams{0.01, 0.02}),
            p1_gaussian_closed(amp, 3, {0.01, 0.02}));
  EXPECT_EQ(p1(amp, 3, DepolParams{0.8}), p1_depolarizing(amp, 3, {0.8}));
}

TEST(CheckedProbability, ClampsRoundOffAndRejectsRealViolations) {
  EXPECT_EQ(detail::checked_probability(1.0 + 5e-13, "t"), 1.0);
  EXPECT_EQ(detail::checked_probability(-5e-13, "t"), 0.0);
  EXPECT_THROW(detail::checked_probability(1.0 + 1e-9, "t"), InternalConsistencyError);
  EXPECT_THROW(detail::checked_probability(std::nan(""), "t"), InternalConsistencyError);
}

TEST(NoiseModelProperty, ClosedFormIsProbabilityAndComplementsQuadratureP0) {
  for_all(300, 11, [](Gen& g, std::size_t i) {
    const Amplitude amp(g.uniform(0.0, pi / 2));
    const auto m = static_cast<GroverDepth>(g.integer(0, 100));
    const GaussianNoiseParams n{g.uniform(-0.2, 0.2), g.uniform(0.0, 0.2)};
    const double p1v = p1_gaussian_closed(amp, m, n);
    ASSERT_GE(p1v, 0.0) << "case " << i;
    ASSERT_LE(p1v, 1.0) << "case " << i;
    ASSERT_NEAR(p1v + p0_gaussian_quadrature(amp, m, n), 1.0, 1e-9) << "case " << i;
  });
}

TEST(NoiseModelProperty, ClosedFormAgreesWithIndependentSimpsonOracle) {
  for_all(200, 12, [](Gen& g, std::size_t i) {
    const double theta = g.uniform(0.0, pi / 2);
    const auto m = static_cast<GroverDepth>(g.integer(0, 100));
    const double k_mu = g.uniform(-0.2, 0.2);
    const double k_sigma = g.uniform(0.0, 0.2);
    ASSERT_NEAR(p1_gaussian_closed(Amplitude(theta), m, {k_mu, k_sigma}),
                testing::oracle_p1_gaussian(theta, m, k_mu, k_sigma), 1e-9)
        << "case " << i;
  });
}

TEST(NoiseModelProperty, DecayEnvelopeAndZeroDepthIdentity) {
  for_all(2000, 13, [](Gen& g, std::size_t i) {
    const double theta = g.uniform(0.0, pi / 2);
    const auto m = static_cast<GroverDepth>(g.integer(0, 200));
    const GaussianNoiseParams n{g.uniform(-0.5, 0.5), g.uniform(0.0, 0.5)};
    const double d = p_diff_gaussian_closed(Amplitude(theta), m, n);
    ASSERT_LE(std::abs(d), std::exp(-2.0 * n.k_sigma * m) * (1.0 + 1e-15)) << "case " << i;
    const double c = std::cos(theta), s = std::sin(theta);
    ASSERT_EQ(p_diff_gaussian_closed(Amplitude(theta), 0, n), c * c - s * s);
  });
}

TEST(NoiseModelProperty, EnvelopeAttainedWhenCosineIsExtreme) {
  // theta = 0 and k_mu = 0 put the cosine at 1 for every m.
  for (GroverDepth m : {0u, 1u, 7u, 40u}) {
    EXPECT_NEAR(p_diff_gaussian_closed(Amplitude(0.0), m, {0.0, 0.03}), std::exp(-0.06 * m),
                1e-15);
  }
}

TEST(NoiseModelProperty, ZeroMeanMatchesDepolarizingEquivalent) {
  for_all(1000, 14, [](Gen& g, std::size_t i) {
    const Amplitude amp(g.uniform(0.0, pi / 2));
    const auto m = static_cast<GroverDepth>(g.integer(0, 100));
    const double k_sigma = g.uniform(0.0, 0.5);
    ASSERT_NEAR(p1_depolarizing(amp, m, depol_equivalent({0.0, k_sigma})),
                p1_gaussian_closed(amp, m, {0.0, k_sigma}), 1e-12)
        << "case " << i;
  });
}

TEST(NoiseModelProperty, DepolarizingMatchesMixtureOracle) {
  for_all(1000, 15, [](Gen& g, std::size_t i) {
    const double theta = g.uniform(0.0, pi / 2);
    const auto m = static_cast<GroverDepth>(g.integer(0, 300));
    const double q = g.uniform(0.0, 1.0);
    ASSERT_NEAR(p1_depolarizing(Amplitude(theta), m, {q}), testing::oracle_p1_depol(theta, m, q),
                1e-14)
        << "case " << i;
  });
}

TEST(NoiseModelProperty, PeriodSixAtPiOverSix) {
  const Amplitude amp(pi / 6);
  for (GroverDepth m = 0; m < 60; ++m) {
    EXPECT_NEAR(p1_noiseless(amp, m), p1_noiseless(amp, m % 6), 1e-12) << "m=" << m;
  }
}

}  // namespace
}  // namespace naqae
