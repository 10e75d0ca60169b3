#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>

#include "hyplevy/params.hpp"
#include "hyplevy/special_functions.hpp"

namespace hyplevy {

struct ExponentValue {
  Complex value;
  Complex at;
};

namespace detail {

// Gamma arguments of psi at z: numerator (red, blue), denominator (red, blue).
struct ExponentArgs {
  Complex num_red, num_blue, den_red, den_blue;
};

inline ExponentArgs exponent_args(const HypParams& p, Complex z) {
  return {Complex(1.0 - p.beta + p.gamma, 0.0) - z, Complex(p.beta_hat + p.gamma_hat, 0.0) + z,
          Complex(1.0 - p.beta, 0.0) - z, Complex(p.beta_hat, 0.0) + z};
}

/// log(-psi(z)) up to 2*pi*i; real part is -inf when a denominator Gamma has an exact pole.
inline Complex log_minus_psi(const HypParams& p, Complex z) {
  const auto a = exponent_args(p, z);
  if (distance_to_pole(a.num_red) < kPoleTolerance || distance_to_pole(a.num_blue) < kPoleTolerance) {
    throw PoleError("psi: argument at a pole of the exponent");
  }
  return log_gamma_unchecked(a.num_red) + log_gamma_unchecked(a.num_blue) -
         log_gamma_unchecked(a.den_red) - log_gamma_unchecked(a.den_blue);
}

}  // namespace detail

/// Laplace exponent psi(z), evaluated as exp of a log-gamma combination.
/// Throws PoleError within kPoleTolerance of {1-beta+gamma+k, -beta_hat-gamma_hat-k}.
inline Complex psi(const HypParams& p, Complex z) {
  const Complex l = detail::log_minus_psi(p, z);
  if (std::isinf(l.real())) return {0.0, 0.0};
  const Complex v = -std::exp(l);
  // Real argument: the imaginary part is rounding noise from the log branch.
  return z.imag() == 0.0 ? Complex(v.real(), 0.0) : v;
}

inline ExponentValue evaluate_exponent(const HypParams& p, Complex z) { return {psi(p, z), z}; }

/// log|psi(z)|; stays finite where psi itself would overflow.
inline double log_abs_psi(const HypParams& p, Complex z) {
  return detail::log_minus_psi(p, z).real();
}

namespace detail {

// Limit of Gamma(num + s_num*z) / Gamma(den + s_den*z) as z -> 0.
inline double gamma_quotient_at_zero(double num, double s_num, double den, double s_den) {
  const bool num_pole = near_nonpositive_integer(num);
  const bool den_pole = near_nonpositive_integer(den);
  if (den_pole && !num_pole) return 0.0;
  if (!den_pole) return gamma_real(num) * reciprocal_gamma(den);
  // Gamma(-m + e) ~ (-1)^m / (m! e) on both sides; the e's cancel.
  const long m = std::lround(-num);
  const long j = std::lround(-den);
  const double log_ratio = std::lgamma(static_cast<double>(j) + 1.0) -
                           std::lgamma(static_cast<double>(m) + 1.0);
  const double sign = (((m + j) % 2 == 0) ? 1.0 : -1.0) * (s_den / s_num);
  return sign * std::exp(log_ratio);
}

}  // namespace detail

/// Killing rate q = Gamma(1-beta+gamma) Gamma(beta_hat+gamma_hat) / (Gamma(1-beta) Gamma(beta_hat)).
/// Exactly 0 when a denominator argument is a nonpositive integer; a numerator
/// pole paired with a denominator pole is resolved as the z -> 0 limit of -psi(z).
inline double killing_rate(const HypParams& p) {
  classify(p);
  const double red_num = 1.0 - p.beta + p.gamma;
  const double red_den = 1.0 - p.beta;
  const double blue_num = p.beta_hat + p.gamma_hat;
  const double blue_den = p.beta_hat;
  const bool red_num_pole = detail::near_nonpositive_integer(red_num);
  const bool blue_num_pole = detail::near_nonpositive_integer(blue_num);
  const bool red_den_pole = detail::near_nonpositive_integer(red_den);
  const bool blue_den_pole = detail::near_nonpositive_integer(blue_den);

  if (!red_num_pole && !blue_num_pole) {
    if (red_den_pole || blue_den_pole) return 0.0;
    const auto a = log_gamma_signed(red_num);
    const auto b = log_gamma_signed(blue_num);
    const auto c = log_gamma_signed(red_den);
    const auto d = log_gamma_signed(blue_den);
    return a.sign * b.sign * c.sign * d.sign * std::exp(a.log_abs + b.log_abs - c.log_abs - d.log_abs);
  }
  if (red_num_pole && blue_num_pole) {
    throw PoleError("killing_rate: psi has a double pole at 0");
  }
  // Exactly one numerator pole; pair it with a denominator pole.
  // Red arguments move as -z, blue as +z.
  if (red_num_pole) {
    double q;
    if (blue_den_pole) {
      q = detail::gamma_quotient_at_zero(red_num, -1.0, blue_den, 1.0) *
          gamma_real(blue_num) * reciprocal_gamma(red_den);
    } else if (red_den_pole) {
      q = detail::gamma_quotient_at_zero(red_num, -1.0, red_den, -1.0) *
          gamma_real(blue_num) * reciprocal_gamma(blue_den);
    } else {
      throw PoleError("killing_rate: psi has a pole at 0");
    }
    return q;
  }
  if (blue_den_pole) {
    return detail::gamma_quotient_at_zero(blue_num, 1.0, blue_den, 1.0) *
           gamma_real(red_num) * reciprocal_gamma(red_den);
  }
  if (red_den_pole) {
    return detail::gamma_quotient_at_zero(blue_num, 1.0, red_den, -1.0) *
           gamma_real(red_num) * reciprocal_gamma(blue_den);
  }
  throw PoleError("killing_rate: psi has a pole at 0");
}

/// Least-squares slope of log|psi(i z)| against log z over the given abscissae.
inline double growth_order(const HypParams& p, std::span<const double> abscissae) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(abscissae.size());
  for (double z : abscissae) {
    const double x = std::log(z);
    const double y = log_abs_psi(p, Complex(0.0, z));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// Growth order fitted on |z| in {1e3, 1e4, 1e5, 1e6}.
inline double growth_order(const HypParams& p) {
  static constexpr std::array<double, 4> kAbscissae = {1e3, 1e4, 1e5, 1e6};
  classify(p);
  return growth_order(p, kAbscissae);
}

}  // namespace hyplevy
