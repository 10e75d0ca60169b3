#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hyplevy/exponent.hpp"
#include "support.hpp"

using namespace hyplevy;
using namespace fixtures;

namespace {

TEST(KillingRate, MatchesGammaOracleForA1) {
  // Gamma(0.6) Gamma(0.5) / (Gamma(0.1) Gamma(0.2)), 40-digit reference.
  EXPECT_NEAR(killing_rate(kA1), 0.060435555913883812024, 1e-12 * 0.0604355559);
}

TEST(KillingRate, EqualsMinusPsiAtZero) {
  for (const auto& p : worked()) {
    const double q = killing_rate(p);
    EXPECT_NEAR(q, -psi(p, {0.0, 0.0}).real(), 1e-12 * q);
    EXPECT_GT(q, 0.0);
  }
  for (const auto& p : random_sets_all(25, 31)) {
    const double q = killing_rate(p);
    EXPECT_NEAR(q, -psi(p, {0.0, 0.0}).real(), 1e-12 * std::max(q, 1e-300));
    EXPECT_GE(q, 0.0);
  }
}

TEST(KillingRate, VanishesWhenZeroIsARoot) {
  EXPECT_EQ(killing_rate({1.0, 0.5, 0.2, 0.3}), 0.0);
  EXPECT_EQ(killing_rate({0.5, 0.5, 0.0, 0.3}), 0.0);
}

TEST(KillingRate, PairedPoleLimit) {
  // 1-beta+gamma = -1 (numerator pole) with beta_hat = 0 (denominator pole).
  const HypParams p{2.5, 0.5, 0.0, 0.7};
  ASSERT_EQ(classify(p), (Regime{RegimeTag::A4, 2}));
  const double h = 1e-6;
  const double limit = -0.5 * (psi(p, {h, 0.0}).real() + psi(p, {-h, 0.0}).real());
  EXPECT_NEAR(killing_rate(p), limit, 1e-8 * std::abs(limit));
}

TEST(Psi, PolesAndRoots) {
  EXPECT_THROW(psi(kA1, {0.6, 0.0}), PoleError);
  EXPECT_THROW(psi(kA1, {-0.5, 0.0}), PoleError);
  EXPECT_LT(std::abs(psi(kA1, {0.1, 0.0})), 1e-12);
  EXPECT_LT(std::abs(psi(kA1, {-1.2, 0.0})), 1e-12);
}

TEST(Psi, RealOnRealAxisAndConjugateSymmetric) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (const auto& p : worked()) {
    for (int i = 0; i < 50; ++i) {
      const Complex z(u(rng), u(rng));
      const Complex a = psi(p, std::conj(z));
      const Complex b = std::conj(psi(p, z));
      EXPECT_LE(std::abs(a - b), 1e-12 * std::abs(b));
    }
    EXPECT_EQ(psi(p, {0.05, 0.0}).imag(), 0.0);
  }
}

TEST(Psi, DualityReflectsArgument) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  for (const auto& p : random_sets_all(10, 77)) {
    const HypParams d = dual(p);
    for (int i = 0; i < 20; ++i) {
      const Complex z(0.0, u(rng));
      const Complex a = psi(d, z);
      const Complex b = psi(p, -z);
      EXPECT_LE(std::abs(a - b), 1e-11 * std::abs(b));
    }
  }
}

TEST(Psi, EvaluateExponentEchoesPoint) {
  const auto v = evaluate_exponent(kA2, {0.0, 3.0});
  EXPECT_EQ(v.at, Complex(0.0, 3.0));
  EXPECT_EQ(v.value, psi(kA2, {0.0, 3.0}));
}

TEST(GrowthOrder, EqualsGammaPlusGammaHat) {
  for (const auto& p : worked()) {
    EXPECT_NEAR(growth_order(p), p.gamma + p.gamma_hat, 0.05);
  }
  for (const auto& p : random_sets_all(10, 55)) {
    EXPECT_NEAR(growth_order(p), p.gamma + p.gamma_hat, 0.05);
  }
}

TEST(LogAbsPsi, MatchesReferenceValues) {
  // mpmath, 50 digits
  EXPECT_NEAR(log_abs_psi(kA1, {0.0, 1e6}), 11.05240844637140113, 1e-9);
  EXPECT_NEAR(log_abs_psi(kA1, {-40.3, 0.0}), 2.3133824658217353806, 1e-11);
}

}  // namespace
