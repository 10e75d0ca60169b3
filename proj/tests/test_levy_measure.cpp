#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hyplevy/levy_measure.hpp"
#include "support.hpp"

using namespace hyplevy;
using namespace fixtures;

namespace {

struct DensityCase {
  HypParams p;
  double x;
  double expected;
};

// Residue series summed in mpmath at 40 digits.
const DensityCase kDensity[] = {
    {kA1, -3.0, 0.03716728245127708}, {kA1, -1.0, 0.2491881237979492},
    {kA1, -0.5, 0.8418539726930719},  {kA1, 0.5, 1.0673252741277879},
    {kA1, 1.0, 0.3174170487610201},   {kA1, 3.0, 0.042319923064602145},
    {kA2, -3.0, 0.019456953643515865}, {kA2, -1.0, 0.22761877517286194},
    {kA2, -0.5, 1.0966121587221116},  {kA2, 0.5, 1.7631794063703832},
    {kA2, 1.0, 0.34238215235325503},  {kA2, 3.0, 0.026196174009854606},
    {kA3, -3.0, 0.015249239144326231}, {kA3, -1.0, 0.0946577791110052},
    {kA3, -0.5, 0.2623334903667489},  {kA3, 0.5, 0.7016070522370931},
    {kA3, 1.0, 0.25593134299019477},  {kA3, 3.0, 0.051898177117977666},
    {kA4, -3.0, 0.03638767052395717}, {kA4, -1.0, 0.2290961619021937},
    {kA4, -0.5, 0.7534631901864169},  {kA4, 0.5, 0.6689905059459017},
    {kA4, 1.0, 0.2330701501199337},   {kA4, 3.0, 0.042608960949073925},
};

TEST(DensityClosed, ReferenceValues) {
  for (const auto& c : kDensity) {
    EXPECT_NEAR(density_closed(c.p, c.x), c.expected, 1e-11 * c.expected) << c.p.beta << " x=" << c.x;
  }
}

TEST(DensityClosed, A1UpperBranchFormula) {
  // -Gamma(1.1)/(Gamma(0.8) Gamma(-0.5)) e^{-0.6} 2F1(1.5, 1.1; 0.8; e^{-1})
  const double f = 2.5090532345960939679;
  const double v = -std::tgamma(1.1) / (std::tgamma(0.8) * std::tgamma(-0.5)) * std::exp(-0.6) * f;
  EXPECT_NEAR(density_closed(kA1, 1.0), v, 1e-13 * v);
  EXPECT_NEAR(v, 0.31741704876102012769, 1e-14);
}

TEST(DensityClosed, DomainErrors) {
  EXPECT_THROW(density_closed(kA1, 0.0), DomainError);
  EXPECT_THROW(density_closed(kA1, 5e-9), DomainError);
  EXPECT_THROW(density_closed(kA1, -5e-9), DomainError);
  EXPECT_NO_THROW(density_closed(kA1, 1e-8));
  EXPECT_THROW(density_closed(kA3Misprint, 1.0), OutOfDomainError);
}

TEST(DensityClosed, CancellationBoundaryRaises) {
  // Red roots meet blue poles; the blue 2F1 gets c = eta - gamma = -1.
  const HypParams p{0.8, 0.4, -1.5, 0.3};
  ASSERT_NEAR(eta(p) - p.gamma, -1.0, 1e-12);
  EXPECT_THROW(density_closed(p, 1.0), ParameterError);
}

TEST(Residues, A3ReferenceValues) {
  // a_k rho_k = -Res at the two positive blue poles.
  EXPECT_NEAR(-residue_blue(kA3, 0), 0.11070016009930090507, 1e-14);
  EXPECT_NEAR(-residue_blue(kA3, 1), 0.081180117406153997055, 1e-14);
}

TEST(Residues, ClosedFormMatchesNumericalLimit) {
  for (const auto& p : worked()) {
    for (int k = 0; k <= 20; ++k) {
      const double r = residue_red(p, k);
      const double b = residue_blue(p, k);
      EXPECT_NEAR(numerical_residue(p, red_pole(p, k)), r, 1e-8 * std::abs(r)) << p.beta << " red " << k;
      EXPECT_NEAR(numerical_residue(p, blue_pole(p, k)), b, 1e-8 * std::abs(b)) << p.beta << " blue " << k;
    }
  }
}

TEST(Mixture, PositiveWeightsAndIncreasingRates) {
  auto sets = random_sets_all(10, 61);
  sets.insert(sets.end(), worked().begin(), worked().end());
  for (const auto& p : sets) {
    const auto m = mixture_coefficients(p, 200);
    EXPECT_EQ(m.truncation_K, 200);
    ASSERT_EQ(m.pos_terms.size(), 200u);
    ASSERT_EQ(m.neg_terms.size(), 200u);
    for (const auto* side : {&m.pos_terms, &m.neg_terms}) {
      for (std::size_t i = 0; i < side->size(); ++i) {
        EXPECT_GT((*side)[i].weight_rate, 0.0);
        if (i > 0) {
          EXPECT_GT((*side)[i].rate, (*side)[i - 1].rate);
        }
      }
    }
  }
}

TEST(Mixture, A3NegativeSideStartsAfterShift) {
  const auto m = mixture_coefficients(kA3, 20);
  const int n = classify(kA3).shift_n;
  EXPECT_NEAR(m.neg_terms.front().rate, kA3.beta_hat + kA3.gamma_hat + n + 1, 1e-12);
  EXPECT_NEAR(m.pos_terms[0].rate, 0.4, 1e-12);
  EXPECT_NEAR(m.pos_terms[0].weight_rate, 0.081180117406153997055, 1e-14);
}

TEST(Mixture, Limits) {
  EXPECT_THROW(mixture_coefficients(kA1, 0), ParameterError);
  EXPECT_THROW(mixture_coefficients(kA1, 5001), ParameterError);
  EXPECT_EQ(mixture_coefficients(kA1, 5000).pos_terms.size(), 5000u);
}

TEST(DensitySeries, SingleTerm) {
  MixtureCoefficients m;
  m.pos_terms = {{2.0, 3.0}};
  m.truncation_K = 1;
  EXPECT_DOUBLE_EQ(density_series(m, 1.0), 2.0 * std::exp(-3.0));
  EXPECT_THROW(density_series(m, 0.0), DomainError);
}

TEST(DensitySeries, ShortTruncationIsReported) {
  const auto m = mixture_coefficients(kA1, 5);
  EXPECT_THROW(density_series(m, 0.01), TruncationError);
  EXPECT_NO_THROW(density_series(m, 20.0));
}

TEST(DensitySeries, AgreesWithClosedForm) {
  for (const auto& p : worked()) {
    const auto m = mixture_coefficients(p, 200);
    for (double x : {-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0}) {
      const double c = density_closed(p, x);
      EXPECT_NEAR(density_series(m, x), c, 1e-7 * c) << p.beta << " x=" << x;
    }
  }
  for (const auto& p : random_sets_all(10, 71)) {
    const auto m = mixture_coefficients(p, 200);
    for (double x : {-2.0, -1.0, 1.0, 2.0}) {
      const double c = density_closed(p, x);
      EXPECT_NEAR(density_series(m, x), c, 1e-7 * c) << p.beta << " x=" << x;
    }
  }
}

TEST(DensityClosed, Duality) {
  auto sets = random_sets_all(10, 81);
  sets.insert(sets.end(), worked().begin(), worked().end());
  for (const auto& p : sets) {
    for (double x : {-4.0, -1.3, -0.2, 0.2, 0.7, 2.5}) {
      const double a = density_closed(p, x);
      EXPECT_NEAR(density_closed(dual(p), -x), a, 1e-9 * a);
    }
  }
}

TEST(DensityClosed, Positivity) {
  for (const auto& p : worked()) {
    for (int i = 0; i < 1000; ++i) {
      const double x = -10.0 + 20.0 * (i + 0.5) / 1000.0;
      EXPECT_GT(density_closed(p, x), 0.0) << x;
    }
  }
  for (const auto& p : random_sets_all(10, 91)) {
    for (double x : {-8.0, -1.0, -1e-4, 1e-4, 1.0, 8.0}) EXPECT_GT(density_closed(p, x), 0.0);
  }
}

TEST(SmallX, ExponentIsMinusOneMinusGammaSum) {
  for (const auto& p : worked()) {
    const double expected = -1.0 - p.gamma - p.gamma_hat;
    EXPECT_NEAR(small_x_exponent(p, 1.0), expected, 0.1);
    EXPECT_NEAR(small_x_exponent(p, -1.0), expected, 0.1);
  }
}

TEST(Integrability, ConvergesForWorkedExamples) {
  for (const auto& p : worked()) {
    const auto r = integrability_check(p);
    EXPECT_TRUE(r.converged);
    EXPECT_TRUE(std::isfinite(r.integral_min1x2));
    EXPECT_GT(r.integral_min1x2, 0.0);
  }
}

}  // namespace
