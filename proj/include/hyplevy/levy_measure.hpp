#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "hyplevy/errors.hpp"
#include "hyplevy/exponent.hpp"
#include "hyplevy/lattice.hpp"
#include "hyplevy/params.hpp"
#include "hyplevy/quadrature.hpp"
#include "hyplevy/special_functions.hpp"

namespace hyplevy {

/// pi diverges at 0; closed-form evaluation stops at this distance.
inline constexpr double kDensityXMin = 1e-8;

struct MixtureTerm {
  double weight_rate = 0.0;  // a_k rho_k
  double rate = 0.0;         // rho_k
};

/// pi(x) = sum pos_terms w e^{-r x} for x > 0, sum neg_terms w e^{r x} for x < 0.
struct MixtureCoefficients {
  std::vector<MixtureTerm> pos_terms;
  std::vector<MixtureTerm> neg_terms;
  int truncation_K = 0;
};

namespace detail {

// Gamma(x) / Gamma(y) via log-gammas; 0 when y is a pole of Gamma.
inline double gamma_ratio_real(double x, double y) {
  if (near_nonpositive_integer(y)) return 0.0;
  const auto a = log_gamma_signed(x);
  const auto b = log_gamma_signed(y);
  return a.sign * b.sign * std::exp(a.log_abs - b.log_abs);
}

// Gamma(1+g+k) / (Gamma(1+g) Gamma(-g) k!)
inline double pochhammer_weight(double g, int k) {
  const auto a = log_gamma_signed(1.0 + g + k);
  const auto b = log_gamma_signed(1.0 + g);
  const auto c = log_gamma_signed(-g);
  const double lk = std::lgamma(static_cast<double>(k) + 1.0);
  return a.sign * b.sign * c.sign * std::exp(a.log_abs - b.log_abs - c.log_abs - lk);
}

}  // namespace detail

/// Residue of psi at the red pole 1-beta+gamma+k.
inline double residue_red(const HypParams& p, int k) {
  const double e = eta(p);
  return detail::gamma_ratio_real(e + k, e - p.gamma_hat + k) * detail::pochhammer_weight(p.gamma, k);
}

/// Residue of psi at the blue pole -beta_hat-gamma_hat-k.
inline double residue_blue(const HypParams& p, int k) {
  const double e = eta(p);
  return -detail::gamma_ratio_real(e + k, e - p.gamma + k) *
         detail::pochhammer_weight(p.gamma_hat, k);
}

inline double red_pole(const HypParams& p, int k) { return 1.0 - p.beta + p.gamma + k; }
inline double blue_pole(const HypParams& p, int k) { return -p.beta_hat - p.gamma_hat - k; }

/// lim_{e -> 0} e psi(pole + e), from symmetric differences and Richardson
/// extrapolation in e^2. Independent of the closed residue formulas.
inline double numerical_residue(const HypParams& p, double pole) {
  // Distance to the nearest other pole of either family.
  double gap = 1.0;
  const std::pair<double, double> families[] = {{1.0 - p.beta + p.gamma, 1.0},
                                                {-p.beta_hat - p.gamma_hat, -1.0}};
  for (const auto& [base, step] : families) {
    const double k = std::round((pole - base) / step);
    for (double dk : {-1.0, 0.0, 1.0}) {
      const double d = std::abs(base + step * std::max(k + dk, 0.0) - pole);
      if (d > 1e-9) gap = std::min(gap, d);
    }
  }
  const auto g = [&](double eps) {
    const double up = eps * psi(p, Complex(pole + eps, 0.0)).real();
    const double dn = -eps * psi(p, Complex(pole - eps, 0.0)).real();
    return 0.5 * (up + dn);
  };
  constexpr int kLevels = 7;
  double table[kLevels][kLevels];
  double h = gap / 8.0;
  double best = 0.0;
  double best_change = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kLevels; ++i, h *= 0.5) {
    table[i][0] = g(h);
    double factor = 1.0;
    for (int j = 1; j <= i; ++j) {
      factor *= 4.0;
      table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
    }
    if (i > 0) {
      const double change = std::abs(table[i][i] - table[i - 1][i - 1]);
      if (change < best_change) {
        best_change = change;
        best = table[i][i];
      }
    } else {
      best = table[0][0];
    }
  }
  return best;
}

/// First K mixture terms on each side, from the closed residue formulas.
inline MixtureCoefficients mixture_coefficients(const HypParams& p, int K) {
  if (K <= 0 || K > 5000) throw ParameterError("mixture_coefficients: K must be in [1, 5000]");
  const RootPoleLattice lat = enumerate(p, K);
  const auto weight = [&](const LatticePoint& q) {
    return q.origin == Origin::Red ? residue_red(p, q.family_index)
                                   : residue_blue(p, q.family_index);
  };
  MixtureCoefficients m;
  m.truncation_K = K;
  for (const auto& q : lat.pos_poles) m.pos_terms.push_back({-weight(q), q.value});
  for (const auto& q : lat.neg_poles) m.neg_terms.push_back({weight(q), q.value});
  return m;
}

/// Truncated exponential mixture at x with a tail estimate from the decay of the last terms.
/// Throws TruncationError if that estimate exceeds 1e-12 of the partial sum.
inline double density_series(const MixtureCoefficients& m, double x) {
  if (x == 0.0 || !std::isfinite(x)) throw DomainError("density_series: x must be nonzero and finite");
  const auto& terms = x > 0.0 ? m.pos_terms : m.neg_terms;
  const double ax = std::abs(x);
  double sum = 0.0;
  std::vector<double> t(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    t[i] = terms[i].weight_rate * std::exp(-terms[i].rate * ax);
    sum += t[i];
  }
  if (terms.size() >= 2) {
    const std::size_t last = terms.size() - 1;
    const std::size_t span = std::min<std::size_t>(10, last);
    const double t_last = std::abs(t[last]);
    if (t_last > 0.0) {
      const double ratio = std::pow(t_last / std::abs(t[last - span]), 1.0 / static_cast<double>(span));
      const double tail = ratio < 1.0 ? 2.0 * t_last * ratio / (1.0 - ratio)
                                      : std::numeric_limits<double>::infinity();
      if (!(tail <= 1e-12 * std::abs(sum))) {
        throw TruncationError("density_series: truncation too short at this x");
      }
    }
  }
  return sum;
}

namespace detail {

// sum_{k >= k0} t_k with t_k = first * prod (a+j)(b+j)/((c+j)(j+1)) z over j = k0..k-1.
inline double shifted_series(double first, double a, double b, double c, int k0, double z) {
  double term = first;
  double sum = first;
  if (first == 0.0) return 0.0;
  const double settle = std::max({std::abs(a), std::abs(b), std::abs(c)}) + 2.0;
  for (int k = k0; k < k0 + kHypergeometricTermCap; ++k) {
    const double dk = k;
    term *= (a + dk) * (b + dk) / ((c + dk) * (dk + 1.0)) * z;
    sum += term;
    if (term == 0.0) return sum;
    if (dk > settle) {
      const double next = std::abs((a + dk + 1.0) * (b + dk + 1.0) / ((c + dk + 1.0) * (dk + 2.0)) * z);
      if (next < 1.0 && std::abs(term) * next / (1.0 - next) <= 1e-16 * std::abs(sum)) return sum;
    }
  }
  throw ConvergenceError("density_closed: tail series did not converge");
}

}  // namespace detail

/// Closed-form Levy density: Gauss 2F1 tails with finite corrections for the
/// poles that sit on the other side of the origin in A3/A4.
/// Throws DomainError for |x| < 1e-8 and ParameterError when a 2F1 lower
/// parameter is a nonpositive integer (root/pole cancellation boundary).
inline double density_closed(const HypParams& p, double x) {
  const Regime r = classify(p);
  if (!(std::abs(x) >= kDensityXMin) || !std::isfinite(x)) {
    throw DomainError("density_closed: |x| must be at least 1e-8");
  }
  const double e = eta(p);
  const double c_red = e - p.gamma_hat;
  const double c_blue = e - p.gamma;
  if (detail::near_nonpositive_integer(c_red) || detail::near_nonpositive_integer(c_blue)) {
    throw ParameterError("density_closed: hypergeometric parameter at a nonpositive integer");
  }
  // First red pole right of 0 and first blue pole left of 0.
  const int red_start = r.tag == RegimeTag::A4 ? r.shift_n : 0;
  const int blue_start = r.tag == RegimeTag::A3 ? r.shift_n + 1 : 0;

  const double red_base = 1.0 - p.beta + p.gamma;
  const double blue_base = p.beta_hat + p.gamma_hat;

  if (x > 0.0) {
    // Red tail sum_{k >= red_start} -Res_red(k) e^{-(red_base+k) x}.
    const double z = std::exp(-x);
    double red;
    if (red_start == 0) {
      red = -residue_red(p, 0) * std::exp(-red_base * x) * gauss_2f1(1.0 + p.gamma, e, c_red, z);
    } else if (z <= 0.5) {
      const double first = -residue_red(p, red_start) * std::exp(-(red_base + red_start) * x);
      red = detail::shifted_series(first, 1.0 + p.gamma, e, c_red, red_start, z);
    } else {
      red = -residue_red(p, 0) * std::exp(-red_base * x) * gauss_2f1(1.0 + p.gamma, e, c_red, z);
      for (int k = 0; k < red_start; ++k) red += residue_red(p, k) * std::exp(-(red_base + k) * x);
    }
    // Blue poles right of 0: -Res_blue(k) e^{(blue_base+k) x}, k < blue_start.
    double blue = 0.0;
    for (int k = 0; k < blue_start; ++k) blue -= residue_blue(p, k) * std::exp((blue_base + k) * x);
    return red + blue;
  }

  // x < 0: blue tail sum_{k >= blue_start} Res_blue(k) e^{(blue_base+k) x}.
  const double z = std::exp(x);
  double blue;
  if (blue_start == 0) {
    blue = residue_blue(p, 0) * std::exp(blue_base * x) * gauss_2f1(1.0 + p.gamma_hat, e, c_blue, z);
  } else if (z <= 0.5) {
    const double first = residue_blue(p, blue_start) * std::exp((blue_base + blue_start) * x);
    blue = detail::shifted_series(first, 1.0 + p.gamma_hat, e, c_blue, blue_start, z);
  } else {
    blue = residue_blue(p, 0) * std::exp(blue_base * x) * gauss_2f1(1.0 + p.gamma_hat, e, c_blue, z);
    for (int k = 0; k < blue_start; ++k) blue -= residue_blue(p, k) * std::exp((blue_base + k) * x);
  }
  // Red poles left of 0: Res_red(k) e^{-(red_base+k) x}, k < red_start.
  double red = 0.0;
  for (int k = 0; k < red_start; ++k) red += residue_red(p, k) * std::exp(-(red_base + k) * x);
  return blue + red;
}

/// Least-squares slope of log pi(x) against log|x| on 7 log-spaced points of
/// [1e-6, 1e-3] on the chosen side (sign of `side`).
inline double small_x_exponent(const HypParams& p, double side = 1.0) {
  const double s = side < 0.0 ? -1.0 : 1.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  constexpr int kPoints = 7;
  for (int i = 0; i < kPoints; ++i) {
    const double ax = std::pow(10.0, -6.0 + 3.0 * i / (kPoints - 1));
    const double lx = std::log(ax);
    const double ly = std::log(density_closed(p, s * ax));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (kPoints * sxy - sx * sy) / (kPoints * sxx - sx * sx);
}

struct IntegrabilityResult {
  double integral_min1x2 = 0.0;
  bool converged = false;
};

/// Integral of min(1, x^2) pi(x): quadrature on [x_min, 50] per side, a
/// power-law extrapolation below x_min and an exponential tail beyond 50.
inline IntegrabilityResult integrability_check(const HypParams& p) {
  classify(p);
  constexpr double kUpper = 50.0;
  IntegrabilityResult res;
  double total = 0.0;
  double err = 0.0;
  bool ok = true;
  try {
    for (double s : {1.0, -1.0}) {
      const auto f_small = [&](double ax) { return ax * ax * density_closed(p, s * ax); };
      const auto f_large = [&](double ax) { return density_closed(p, s * ax); };
      const auto near = quad::tanh_sinh(f_small, kDensityXMin, 1.0, 1e-10);
      const auto far = quad::gauss_kronrod(f_large, 1.0, kUpper, 1e-10);

      // pi ~ C |x|^alpha below x_min.
      const double x1 = kDensityXMin;
      const double x2 = 10.0 * kDensityXMin;
      const double alpha = std::log(density_closed(p, s * x2) / density_closed(p, s * x1)) / std::log(10.0);
      double head = std::numeric_limits<double>::infinity();
      if (alpha > -3.0) head = density_closed(p, s * x1) * x1 * x1 * x1 / (alpha + 3.0);

      // pi ~ w e^{-r |x|} beyond the upper limit, r the decay rate at 50.
      const double v50 = density_closed(p, s * kUpper);
      const double v49 = density_closed(p, s * (kUpper - 1.0));
      const double rate = std::log(v49 / v50);
      double tail = std::numeric_limits<double>::infinity();
      if (rate > 0.0) tail = v50 / rate;

      if (!std::isfinite(head) || !std::isfinite(tail) || !std::isfinite(near.value) ||
          !std::isfinite(far.value)) {
        ok = false;
      }
      total += near.value + far.value + head + tail;
      err += near.error + far.error;
    }
  } catch (const Error&) {
    ok = false;
  }
  res.integral_min1x2 = total;
  res.converged = ok && std::isfinite(total) && err <= 1e-6 * std::abs(total);
  return res;
}

}  // namespace hyplevy
