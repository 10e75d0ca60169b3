#pragma once

// Complex log-gamma, Gauss hypergeometric 2F1 on the real segment (-1, 1),
// Pochhammer symbols. Everything real is routed through the complex
// log-gamma so there is one accuracy story.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "hyplevy/errors.hpp"

namespace hyplevy {

using Complex = std::complex<double>;

/// Absolute distance to a nonpositive integer below which Gamma is treated as a pole.
inline constexpr double kPoleTolerance = 1e-10;

namespace detail {

inline constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

// Stirling coefficients B_{2k} / (2k (2k-1)), k = 1..10.
inline constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

inline constexpr double kStirlingThreshold = 15.0;

/// Distance from z to the nearest nonpositive integer, or +inf if Re z > 0.5.
inline double distance_to_pole(Complex z) {
  if (z.real() > 0.5) return std::numeric_limits<double>::infinity();
  const double m = std::round(z.real());
  return std::abs(z - Complex(m, 0.0));
}

/// Principal log-gamma with no pole check. At an exact pole the real part is +inf.
inline Complex log_gamma_unchecked(Complex z) {
  Complex shift_sum(0.0, 0.0);
  while (z.real() < kStirlingThreshold) {
    if (z == Complex(0.0, 0.0)) {
      return {std::numeric_limits<double>::infinity(), 0.0};
    }
    shift_sum += std::log(z);
    z += 1.0;
  }
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex series(0.0, 0.0);
  Complex power = inv;
  for (double c : kStirling) {
    series += c * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series - shift_sum;
}

/// True when x is within tolerance of 0, -1, -2, ...
inline bool near_nonpositive_integer(double x, double tol = kPoleTolerance) {
  if (x > 0.5) return false;
  return std::abs(x - std::round(x)) < tol;
}

}  // namespace detail

/// Principal branch of log Gamma(z).
/// Throws PoleError within kPoleTolerance of a nonpositive integer.
inline Complex log_gamma(Complex z) {
  if (detail::distance_to_pole(z) < kPoleTolerance) {
    throw PoleError("log_gamma: argument at a pole of Gamma");
  }
  return detail::log_gamma_unchecked(z);
}

/// log|Gamma(x)| together with the sign of Gamma(x).
struct SignedLog {
  double log_abs;
  int sign;
};

inline SignedLog log_gamma_signed(double x) {
  const Complex lg = log_gamma(Complex(x, 0.0));
  // Imaginary part is -(m+1)*pi on (-m-1, -m); its parity carries the sign.
  const long turns = std::lround(lg.imag() / std::numbers::pi);
  return {lg.real(), (turns % 2 == 0) ? 1 : -1};
}

inline double gamma_real(double x) {
  const auto [l, s] = log_gamma_signed(x);
  return s * std::exp(l);
}

/// 1/Gamma(x), exactly 0 at the poles of Gamma.
inline double reciprocal_gamma(double x) {
  if (detail::near_nonpositive_integer(x)) return 0.0;
  const auto [l, s] = log_gamma_signed(x);
  return s * std::exp(-l);
}

/// Rising factorial (x)_k = x (x+1) ... (x+k-1), (x)_0 = 1.
inline double pochhammer(double x, unsigned k) {
  double r = 1.0;
  for (unsigned i = 0; i < k; ++i) r *= x + static_cast<double>(i);
  return r;
}

namespace detail {

inline constexpr int kHypergeometricTermCap = 100000;

/// Direct Gauss series with a monotone-ratio tail bound.
inline double hypergeometric_series(double a, double b, double c, double z) {
  if (z == 0.0) return 1.0;
  double term = 1.0;
  double sum = 1.0;
  const double settle = std::max({std::abs(a), std::abs(b), std::abs(c)}) + 2.0;
  for (int n = 0; n < kHypergeometricTermCap; ++n) {
    const double dn = static_cast<double>(n);
    const double ratio = (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum;
    if (dn > settle) {
      // Past `settle` the successive-ratio magnitude decreases toward |z|.
      const double next = std::abs((a + dn + 1.0) * (b + dn + 1.0) /
                                   ((c + dn + 1.0) * (dn + 2.0)) * z);
      if (next < 1.0) {
        const double tail = std::abs(term) * next / (1.0 - next);
        if (tail <= 1e-16 * std::abs(sum)) return sum;
      }
    }
  }
  throw ConvergenceError("gauss_2f1: term budget exhausted");
}

}  // namespace detail

/// Gauss hypergeometric 2F1(a, b; c; z) for real |z| < 1.
///
/// |z| <= 0.5 sums the series directly. For 0.5 < z < 1 the argument is
/// mapped to 1-z by the standard connection formula unless c-a-b is within
/// 1e-8 of an integer, in which case the direct series is used with a
/// 100000-term budget.
inline double gauss_2f1(double a, double b, double c, double z) {
  if (detail::near_nonpositive_integer(c)) {
    throw ParameterError("gauss_2f1: c is a nonpositive integer");
  }
  if (!(std::abs(z) < 1.0)) {
    throw DomainError("gauss_2f1: requires |z| < 1");
  }
  if (z <= 0.5) return detail::hypergeometric_series(a, b, c, z);

  const double s = c - a - b;
  if (std::abs(s - std::round(s)) < 1e-8) {
    return detail::hypergeometric_series(a, b, c, z);
  }
  const double w = 1.0 - z;
  const auto [lc, sc] = log_gamma_signed(c);

  // Gamma(c) Gamma(s) / (Gamma(c-a) Gamma(c-b)) * 2F1(a, b; 1-s; w)
  double first = 0.0;
  {
    const double rca = reciprocal_gamma(c - a);
    const double rcb = reciprocal_gamma(c - b);
    if (rca != 0.0 && rcb != 0.0) {
      const auto [ls, ss] = log_gamma_signed(s);
      first = sc * ss * std::exp(lc + ls) * rca * rcb *
              detail::hypergeometric_series(a, b, 1.0 - s, w);
    }
  }
  // w^s Gamma(c) Gamma(-s) / (Gamma(a) Gamma(b)) * 2F1(c-a, c-b; 1+s; w)
  double second = 0.0;
  {
    const double ra = reciprocal_gamma(a);
    const double rb = reciprocal_gamma(b);
    if (ra != 0.0 && rb != 0.0) {
      const auto [lms, sms] = log_gamma_signed(-s);
      second = sc * sms * std::exp(lc + lms + s * std::log(w)) * ra * rb *
               detail::hypergeometric_series(c - a, c - b, 1.0 + s, w);
    }
  }
  return first + second;
}

}  // namespace hyplevy
