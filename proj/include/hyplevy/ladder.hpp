#pragma once

// Ascending ladder height of an A4 process: the subordinator with exponent
// kappa(lambda) = Gamma(a+gamma+lambda)/Gamma(a+lambda), a = n+1-beta.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "hyplevy/errors.hpp"
#include "hyplevy/params.hpp"
#include "hyplevy/quadrature.hpp"
#include "hyplevy/special_functions.hpp"
#include "hyplevy/wiener_hopf.hpp"

namespace hyplevy {

namespace detail {

inline int a4_shift(const HypParams& p) {
  const Regime r = classify(p);
  if (r.tag != RegimeTag::A4) throw RegimeError("ladder objects need an A4 parameter set");
  return r.shift_n;
}

// 1 - e^{-x} without cancellation near 0.
inline double one_minus_exp_neg(double x) { return -std::expm1(-x); }

}  // namespace detail

/// Levy density of the ascending ladder height,
/// gamma/Gamma(1-gamma) (1-e^{-x})^{-gamma-1} e^{-(n+1-beta+gamma) x}.
inline double ladder_density(const HypParams& p, double x) {
  const int n = detail::a4_shift(p);
  if (!(x > 0.0)) throw DomainError("ladder_density: x must be positive");
  const double a = n + 1.0 - p.beta;
  const double g = p.gamma;
  return g * reciprocal_gamma(1.0 - g) *
         std::exp(-(g + 1.0) * std::log(detail::one_minus_exp_neg(x)) - (a + g) * x);
}

/// Potential density (1/Gamma(gamma)) e^{-(n+1-beta) x} (1-e^{-x})^{gamma-1}.
/// Infinite at 0, reported as DivergenceError.
inline double potential_density(const HypParams& p, double x) {
  const int n = detail::a4_shift(p);
  if (x < 0.0 || !std::isfinite(x)) throw DomainError("potential_density: x must be nonnegative");
  if (x == 0.0) throw DivergenceError("potential_density: diverges at 0");
  const double a = n + 1.0 - p.beta;
  const double g = p.gamma;
  return reciprocal_gamma(g) * std::exp(-a * x + (g - 1.0) * std::log(detail::one_minus_exp_neg(x)));
}

/// The descending ladder height has no closed-form potential.
[[noreturn]] inline double descending_potential_density(const HypParams&, double) {
  throw UnsupportedError("descending ladder potential has no closed form");
}

struct LadderTransformReport {
  double nu_difference_error = 0.0;  // worst relative error of kappa(l)-kappa(m) = int (e^{-mx}-e^{-lx}) nu
  double potential_error = 0.0;      // worst |kappa(l) int e^{-lx} u - 1|
  double max_relative_error = 0.0;
};

namespace detail {

inline constexpr double kLadderUpper = 50.0;

// int_0^inf (e^{-mu x} - e^{-lambda x}) nu(x) dx
inline double nu_difference_integral(const HypParams& p, double lambda, double mu) {
  if (lambda == mu) return 0.0;
  const double a = a4_shift(p) + 1.0 - p.beta;
  const double lc = std::log(p.gamma * reciprocal_gamma(1.0 - p.gamma));
  // Kept in one exponent: nu alone overflows as x -> 0 while the product stays integrable.
  const auto f = [&](double x) {
    return std::exp(lc - mu * x + std::log(-std::expm1(-(lambda - mu) * x)) -
                    (p.gamma + 1.0) * std::log(detail::one_minus_exp_neg(x)) - (a + p.gamma) * x);
  };
  const auto body = quad::tanh_sinh(f, 0.0, kLadderUpper, 1e-12);
  // Beyond the cut nu(x) ~ c e^{-(a+gamma) x}.
  const double c = p.gamma * reciprocal_gamma(1.0 - p.gamma);
  const double r = a + p.gamma;
  const double tail = c * (std::exp(-(r + mu) * kLadderUpper) / (r + mu) -
                           std::exp(-(r + lambda) * kLadderUpper) / (r + lambda));
  return body.value + tail;
}

// int_0^inf e^{-lambda x} u(x) dx
inline double potential_transform(const HypParams& p, double lambda) {
  const double a = a4_shift(p) + 1.0 - p.beta;
  const auto f = [&](double x) { return std::exp(-lambda * x) * potential_density(p, x); };
  const auto body = quad::tanh_sinh(f, 0.0, kLadderUpper, 1e-12);
  const double tail = reciprocal_gamma(p.gamma) * std::exp(-(a + lambda) * kLadderUpper) / (a + lambda);
  return body.value + tail;
}

}  // namespace detail

/// Checks nu and u against kappa: the difference identity over all pairs from
/// `lambdas` and against 0, and kappa(lambda) * int e^{-lambda x} u = 1.
inline LadderTransformReport verify_ladder_transform(const HypParams& p, std::span<const double> lambdas) {
  detail::a4_shift(p);
  const WienerHopfFactor kappa = build_factors(p).first;
  LadderTransformReport rep;
  std::vector<double> mus(lambdas.begin(), lambdas.end());
  mus.push_back(0.0);
  for (double l : lambdas) {
    for (double m : mus) {
      if (m > l) continue;
      const double rhs = eval_factor(kappa, l) - eval_factor(kappa, m);
      const double lhs = detail::nu_difference_integral(p, l, m);
      const double err = rhs == 0.0 ? std::abs(lhs) : std::abs(lhs - rhs) / std::abs(rhs);
      rep.nu_difference_error = std::max(rep.nu_difference_error, err);
    }
    if (l > 0.0) {
      const double prod = eval_factor(kappa, l) * detail::potential_transform(p, l);
      rep.potential_error = std::max(rep.potential_error, std::abs(prod - 1.0));
    }
  }
  rep.max_relative_error = std::max(rep.nu_difference_error, rep.potential_error);
  return rep;
}

}  // namespace hyplevy
