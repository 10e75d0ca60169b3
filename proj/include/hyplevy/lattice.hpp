#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hyplevy/errors.hpp"
#include "hyplevy/params.hpp"
#include "hyplevy/special_functions.hpp"

namespace hyplevy {

/// Which Gamma ratio of psi a root or pole comes from:
/// Red = Gamma(1-beta+gamma-z)/Gamma(1-beta-z), Blue = Gamma(beta_hat+gamma_hat+z)/Gamma(beta_hat+z).
enum class Origin { Red, Blue };

inline std::string_view to_string(Origin o) { return o == Origin::Red ? "red" : "blue"; }

/// One root or pole. `value` is the distance from the origin (a magnitude on
/// the negative side); `family_index` is the k in 1-beta+k, -beta_hat-k, etc.
struct LatticePoint {
  double value = 0.0;
  Origin origin = Origin::Red;
  int family_index = 0;
};

/// A root and a pole of psi that coincide and cancel.
struct Cancellation {
  double location = 0.0;
  LatticePoint root;
  LatticePoint pole;
};

struct RootPoleLattice {
  std::vector<LatticePoint> pos_roots;
  std::vector<LatticePoint> pos_poles;
  std::vector<LatticePoint> neg_roots;
  std::vector<LatticePoint> neg_poles;
  std::vector<Cancellation> cancellations;
  /// psi(0) = 0 (no killing); the root at 0 belongs to neither side.
  bool zero_root = false;
};

/// Absolute tolerance for treating a root and a pole as the same point.
inline constexpr double kCoincidenceTolerance = 1e-12;

namespace detail {

struct SignedPoint {
  double location;
  Origin origin;
  int family_index;
};

inline void split_by_side(const std::vector<SignedPoint>& pts, std::size_t count,
                          std::vector<LatticePoint>& pos, std::vector<LatticePoint>& neg) {
  for (const auto& s : pts) {
    if (s.location > 0.0) pos.push_back({s.location, s.origin, s.family_index});
    if (s.location < 0.0) neg.push_back({-s.location, s.origin, s.family_index});
  }
  const auto by_value = [](const LatticePoint& a, const LatticePoint& b) { return a.value < b.value; };
  std::sort(pos.begin(), pos.end(), by_value);
  std::sort(neg.begin(), neg.end(), by_value);
  if (pos.size() > count) pos.resize(count);
  if (neg.size() > count) neg.resize(count);
}

}  // namespace detail

/// First `count` roots and poles of psi on each side of the origin.
inline RootPoleLattice enumerate(const HypParams& p, int count) {
  classify(p);
  if (count <= 0 || count > 10000) throw ParameterError("enumerate: count must be in [1, 10000]");

  const int family_terms =
      count + static_cast<int>(std::ceil(std::abs(p.beta) + std::abs(p.beta_hat))) + 4;

  std::vector<detail::SignedPoint> roots;
  std::vector<detail::SignedPoint> poles;
  std::vector<bool> root_gone;
  std::vector<bool> pole_gone;
  roots.reserve(2 * family_terms);
  poles.reserve(2 * family_terms);
  for (int k = 0; k < family_terms; ++k) {
    roots.push_back({1.0 - p.beta + k, Origin::Red, k});
    roots.push_back({-p.beta_hat - k, Origin::Blue, k});
    poles.push_back({1.0 - p.beta + p.gamma + k, Origin::Red, k});
    poles.push_back({-p.beta_hat - p.gamma_hat - k, Origin::Blue, k});
  }
  root_gone.assign(roots.size(), false);
  pole_gone.assign(poles.size(), false);

  RootPoleLattice lat;

  // Same-family roots and poles differ by gamma + integer, so only red/blue
  // pairs can coincide: red root k with blue pole j needs
  // 1-beta+beta_hat+gamma_hat + j + k = 0, blue root j with red pole k needs
  // 1-beta+beta_hat+gamma + j + k = 0.
  const auto cancel_family_pair = [&](double offset, Origin root_origin) {
    const double s = -offset;
    const double total = std::round(s);
    if (total < 0.0 || std::abs(s - total) > kCoincidenceTolerance) return;
    for (int k = 0; k <= static_cast<int>(total) && k < family_terms; ++k) {
      const int j = static_cast<int>(total) - k;
      if (j >= family_terms) continue;
      // Roots/poles are interleaved: index 2k is red, 2k+1 is blue.
      const std::size_t ri = root_origin == Origin::Red ? 2 * k : 2 * j + 1;
      const std::size_t pi = root_origin == Origin::Red ? 2 * j + 1 : 2 * k;
      if (root_gone[ri] || pole_gone[pi]) continue;
      if (std::abs(roots[ri].location - poles[pi].location) > 10 * kCoincidenceTolerance) continue;
      root_gone[ri] = pole_gone[pi] = true;
      const auto& r = roots[ri];
      const auto& q = poles[pi];
      lat.cancellations.push_back({r.location,
                                   {std::abs(r.location), r.origin, r.family_index},
                                   {std::abs(q.location), q.origin, q.family_index}});
    }
  };
  cancel_family_pair(1.0 - p.beta + p.beta_hat + p.gamma_hat, Origin::Red);
  cancel_family_pair(1.0 - p.beta + p.beta_hat + p.gamma, Origin::Blue);

  std::vector<detail::SignedPoint> live_roots;
  std::vector<detail::SignedPoint> live_poles;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (root_gone[i]) continue;
    if (std::abs(roots[i].location) <= kCoincidenceTolerance) {
      lat.zero_root = true;
      continue;
    }
    live_roots.push_back(roots[i]);
  }
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (!pole_gone[i]) live_poles.push_back(poles[i]);
  }

  const auto n = static_cast<std::size_t>(count);
  detail::split_by_side(live_roots, n, lat.pos_roots, lat.neg_roots);
  detail::split_by_side(live_poles, n, lat.pos_poles, lat.neg_poles);
  return lat;
}

namespace detail {

// Merge roots and poles of one side by magnitude; true iff they alternate
// starting with a root (optionally a root sitting at 0).
inline bool alternates_from_root(const std::vector<LatticePoint>& roots,
                                 const std::vector<LatticePoint>& poles, bool leading_zero_root) {
  struct Tagged {
    double value;
    bool is_root;
  };
  std::vector<Tagged> merged;
  merged.reserve(roots.size() + poles.size() + 1);
  if (leading_zero_root) merged.push_back({0.0, true});
  for (const auto& r : roots) merged.push_back({r.value, true});
  for (const auto& q : poles) merged.push_back({q.value, false});
  std::stable_sort(merged.begin() + (leading_zero_root ? 1 : 0), merged.end(),
                   [](const Tagged& a, const Tagged& b) { return a.value < b.value; });
  if (merged.empty()) return true;
  if (!merged.front().is_root) return false;
  for (std::size_t i = 1; i < merged.size(); ++i) {
    if (merged[i].is_root == merged[i - 1].is_root) return false;
    if (!(merged[i].value > merged[i - 1].value)) return false;
  }
  return true;
}

inline bool starts_with_pole(const std::vector<LatticePoint>& roots,
                             const std::vector<LatticePoint>& poles) {
  if (poles.empty()) return false;
  return roots.empty() || poles.front().value < roots.front().value;
}

}  // namespace detail

/// Strict alternation  ... < -rho_2 < -zeta_2 < -rho_1 < -zeta_1 < 0 < zeta_1 < rho_1 < zeta_2 < ...
/// A root at the origin may stand in for zeta_1 or zeta_hat_1 on the side that needs it.
inline bool check_interlacing(const RootPoleLattice& lat) {
  bool pos_zero = false;
  bool neg_zero = false;
  if (lat.zero_root) {
    const bool pos_needs = detail::starts_with_pole(lat.pos_roots, lat.pos_poles);
    const bool neg_needs = detail::starts_with_pole(lat.neg_roots, lat.neg_poles);
    if (pos_needs == neg_needs) return false;
    pos_zero = pos_needs;
    neg_zero = neg_needs;
  }
  return detail::alternates_from_root(lat.pos_roots, lat.pos_poles, pos_zero) &&
         detail::alternates_from_root(lat.neg_roots, lat.neg_poles, neg_zero);
}

inline std::vector<double> values_of(std::span<const LatticePoint> pts) {
  std::vector<double> out;
  out.reserve(pts.size());
  for (const auto& q : pts) out.push_back(q.value);
  return out;
}

// ---------------------------------------------------------------------------
// Lemma 1 coefficients for phi(z) = prod (1 + z/rho_n) / (1 + z/zeta_n).

struct Lemma1Coefficients {
  double a0 = 0.0;
  std::vector<double> a_seq;  // a_1 .. a_K
  double b0 = 0.0;
  std::vector<double> b_seq;  // b_1 .. b_K
  int truncation_K = 0;
};

namespace detail {

inline double lgamma_pos(double x) { return log_gamma(Complex(x, 0.0)).real(); }

// log of prod_{j>=1} (1 - x/rho_{N+j}) / (1 - x/zeta_{N+j}) when both sequences
// continue arithmetically with step s beyond index N.
inline double arithmetic_tail_log(double zeta_last, double rho_last, double step, double x) {
  return lgamma_pos(1.0 + rho_last / step) + lgamma_pos(1.0 + (zeta_last - x) / step) -
         lgamma_pos(1.0 + (rho_last - x) / step) - lgamma_pos(1.0 + zeta_last / step);
}

// (1 - x/num_k) / (1 - x/den_k) over k != skip, as log-magnitude and sign.
inline SignedLog skip_product(std::span<const double> num, std::span<const double> den, double x,
                              std::size_t skip) {
  double log_abs = 0.0;
  int sign = 1;
  for (std::size_t k = 0; k < num.size(); ++k) {
    if (k == skip) continue;
    const double f = (1.0 - x / num[k]) / (1.0 - x / den[k]);
    if (f < 0.0) sign = -sign;
    log_abs += std::log(std::abs(f));
  }
  return {log_abs, sign};
}

}  // namespace detail

/// Coefficients a_0, a_n(rho, zeta), b_0, b_n(zeta, rho) for n <= K.
/// Products past the supplied terms are closed by continuing the last spacing.
inline Lemma1Coefficients lemma1_coefficients(std::span<const double> zeta, std::span<const double> rho,
                                              int K) {
  if (K <= 0) throw ParameterError("lemma1_coefficients: K must be positive");
  const std::size_t terms = std::min(zeta.size(), rho.size());
  if (terms < static_cast<std::size_t>(K) + 20) {
    throw ParameterError("lemma1_coefficients: need at least K+20 terms of each sequence");
  }
  zeta = zeta.first(terms);
  rho = rho.first(terms);
  if (!(zeta[0] > 0.0)) throw InterlacingError("lemma1_coefficients: sequences must be positive");
  for (std::size_t k = 0; k < terms; ++k) {
    if (zeta[k] > rho[k] || (k + 1 < terms && !(rho[k] < zeta[k + 1]))) {
      throw InterlacingError("lemma1_coefficients: need zeta_1 <= rho_1 < zeta_2 <= rho_2 < ...");
    }
  }

  const double zeta_last = zeta[terms - 1];
  const double rho_last = rho[terms - 1];
  const double step = 0.5 * ((zeta_last - zeta[terms - 2]) + (rho_last - rho[terms - 2]));

  Lemma1Coefficients out;
  out.truncation_K = K;

  // a0 = lim prod zeta_k / rho_k; the arithmetic tail sends it to 0 unless the gaps close.
  if (rho_last - zeta_last > kCoincidenceTolerance) {
    out.a0 = 0.0;
  } else {
    double l = 0.0;
    for (std::size_t k = 0; k < terms; ++k) l += std::log(zeta[k] / rho[k]);
    out.a0 = std::exp(l);
  }
  // b0 = (1/zeta_1) lim prod rho_k / zeta_{k+1}; zeta_{k+1} - rho_k stays >= step - gap > 0.
  if (zeta_last + step - rho_last > kCoincidenceTolerance) {
    out.b0 = 0.0;
  } else {
    double l = 0.0;
    for (std::size_t k = 0; k + 1 < terms; ++k) l += std::log(rho[k] / zeta[k + 1]);
    out.b0 = std::exp(l) / zeta[0];
  }

  out.a_seq.resize(K);
  out.b_seq.resize(K);
  for (int n = 0; n < K; ++n) {
    const auto i = static_cast<std::size_t>(n);
    {
      const double x = zeta[i];
      const double lead = 1.0 - x / rho[i];
      if (lead == 0.0) {
        out.a_seq[i] = 0.0;
      } else {
        const auto prod = detail::skip_product(rho, zeta, x, i);
        const double tail = detail::arithmetic_tail_log(zeta_last, rho_last, step, x);
        out.a_seq[i] = lead * prod.sign * std::exp(prod.log_abs + tail);
      }
    }
    {
      const double x = rho[i];
      const double lead = -(1.0 - x / zeta[i]);
      if (lead == 0.0) {
        out.b_seq[i] = 0.0;
      } else {
        const auto prod = detail::skip_product(zeta, rho, x, i);
        const double tail = -detail::arithmetic_tail_log(zeta_last, rho_last, step, x);
        out.b_seq[i] = lead * prod.sign * std::exp(prod.log_abs + tail);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite-difference surrogate for the Bernstein property.

struct BernsteinCertificate {
  bool passed = true;
  int failed_order = 0;        // 0 = value positivity, k = k-th difference
  double worst_excess = 0.0;   // largest violation beyond tolerance, in units of scale
};

inline constexpr int kBernsteinOrders = 8;

/// [0, 50] with 2001 points.
inline std::vector<double> default_bernstein_grid() {
  std::vector<double> g(2001);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = 50.0 * static_cast<double>(i) / 2000.0;
  return g;
}

/// Checks f >= 0, Delta f >= 0 and (-1)^k Delta^k f <= 0 for 2 <= k <= orders,
/// to 1e-9 times max|f| on the grid.
inline BernsteinCertificate bernstein_certificate_from_values(std::vector<double> v, int orders) {
  BernsteinCertificate cert;
  double scale = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) return {false, 0, std::numeric_limits<double>::infinity()};
    scale = std::max(scale, std::abs(x));
  }
  const double tol = 1e-9 * std::max(scale, std::numeric_limits<double>::min());
  const auto note = [&](int order, double excess) {
    if (excess > tol) {
      const double rel = excess / std::max(scale, std::numeric_limits<double>::min());
      if (cert.passed || rel > cert.worst_excess) {
        if (cert.passed) cert.failed_order = order;
        cert.worst_excess = std::max(cert.worst_excess, rel);
      }
      cert.passed = false;
    }
  };
  for (double x : v) note(0, -x);
  for (int k = 1; k <= orders && v.size() > 1; ++k) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = v[i + 1] - v[i];
    v.pop_back();
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;  // (-1)^k
    for (double d : v) note(k, sign * d);
  }
  return cert;
}

template <std::invocable<double> Fn>
BernsteinCertificate bernstein_certificate(Fn&& f, int orders, std::span<const double> grid) {
  if (grid.size() < 2) throw ParameterError("certify_bernstein: grid needs at least two points");
  const double h = grid[1] - grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double hi = grid[i] - grid[i - 1];
    if (!(hi > 0.0) || std::abs(hi - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw ParameterError("certify_bernstein: grid must be strictly increasing and equally spaced");
    }
  }
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
  return bernstein_certificate_from_values(std::move(v), orders);
}

template <std::invocable<double> Fn>
bool certify_bernstein(Fn&& f, int orders, std::span<const double> grid) {
  return bernstein_certificate(std::forward<Fn>(f), orders, grid).passed;
}

}  // namespace hyplevy
