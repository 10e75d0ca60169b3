#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "hyplevy/errors.hpp"

namespace hyplevy {

/// The four parameters (beta, gamma, beta_hat, gamma_hat) of the exponent
///   psi(z) = -Gamma(1-beta+gamma-z) Gamma(beta_hat+gamma_hat+z)
///            / (Gamma(1-beta-z) Gamma(beta_hat+z)).
struct HypParams {
  double beta = 0.0;
  double gamma = 0.0;
  double beta_hat = 0.0;
  double gamma_hat = 0.0;

  friend bool operator==(const HypParams&, const HypParams&) = default;
};

enum class RegimeTag { A1, A2, A3, A4 };

inline std::string_view to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::A1: return "A1";
    case RegimeTag::A2: return "A2";
    case RegimeTag::A3: return "A3";
    case RegimeTag::A4: return "A4";
  }
  return "?";
}

struct Regime {
  RegimeTag tag = RegimeTag::A1;
  int shift_n = 0;

  friend bool operator==(const Regime&, const Regime&) = default;
};

enum class Variation { BoundedNoDrift, Unbounded };

inline std::string_view to_string(Variation v) {
  return v == Variation::BoundedNoDrift ? "bounded_no_drift" : "unbounded";
}

struct DerivedParams {
  double eta = 0.0;
  double sigma_gaussian = 0.0;
  Variation variation = Variation::BoundedNoDrift;
};

/// Slack allowed on every regime inequality.
inline constexpr double kRegimeSlack = 1e-12;

namespace detail {

inline bool ge(double lhs, double rhs) { return lhs >= rhs - kRegimeSlack; }
inline bool le(double lhs, double rhs) { return lhs <= rhs + kRegimeSlack; }
inline bool in_closed(double x, double lo, double hi) { return ge(x, lo) && le(x, hi); }

inline bool in_a1(const HypParams& p) { return le(p.beta, 1.0) && ge(p.beta_hat, 0.0); }

inline bool in_a2(const HypParams& p) {
  return in_closed(p.beta, 1.0, 2.0) && in_closed(p.beta_hat, -1.0, 0.0) &&
         ge(1.0 - p.beta + p.beta_hat + p.gamma, 0.0) &&
         ge(1.0 - p.beta + p.beta_hat + p.gamma_hat, 0.0);
}

inline bool in_a3(const HypParams& p, int n) {
  const double dn = n;
  return in_closed(p.beta, 0.0, 1.0) && in_closed(p.beta_hat, -(dn + 1.0), -dn) &&
         le(1.0 - p.beta + p.beta_hat + p.gamma_hat + dn, 0.0) &&
         ge(1.0 - p.beta + p.beta_hat + p.gamma + dn, 0.0);
}

inline bool in_a4(const HypParams& p, int n) {
  const double dn = n;
  return in_closed(p.beta_hat, 0.0, 1.0) && in_closed(p.beta, dn, dn + 1.0) &&
         ge(dn - p.beta + p.beta_hat + p.gamma_hat, 0.0) &&
         le(dn - p.beta + p.beta_hat + p.gamma, 0.0);
}

inline bool open_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace detail

/// Returns the reason a quadruple is rejected, or nothing if it is admissible.
inline std::optional<std::string> domain_violation(const HypParams& p) {
  for (double v : {p.beta, p.gamma, p.beta_hat, p.gamma_hat}) {
    if (!std::isfinite(v)) return "parameters must be finite";
  }
  if (!detail::open_unit(p.gamma)) return "gamma out of (0,1)";
  if (!detail::open_unit(p.gamma_hat)) return "gamma_hat out of (0,1)";
  return std::nullopt;
}

/// Regime of p under the precedence A1 > A2 > A3 > A4, smallest feasible n.
inline Regime classify(const HypParams& p) {
  if (auto why = domain_violation(p)) throw OutOfDomainError(*why);
  if (detail::in_a1(p)) return {RegimeTag::A1, 0};
  if (detail::in_a2(p)) return {RegimeTag::A2, 0};
  if (p.beta_hat < 0.0) {
    const int hi = static_cast<int>(std::floor(-p.beta_hat)) + 1;
    for (int n = std::max(0, hi - 2); n <= hi; ++n) {
      if (detail::in_a3(p, n)) return {RegimeTag::A3, n};
    }
  }
  if (p.beta > 1.0) {
    const int hi = static_cast<int>(std::floor(p.beta)) + 1;
    for (int n = std::max(1, hi - 2); n <= hi; ++n) {
      if (detail::in_a4(p, n)) return {RegimeTag::A4, n};
    }
  }
  throw OutOfDomainError("parameters satisfy none of A1, A2, A3, A4");
}

/// The regime inequalities for (p, r), each written as `value >= 0`.
/// Intended for diagnostics and property tests.
inline std::array<double, 6> regime_slacks(const HypParams& p, const Regime& r) {
  const double n = r.shift_n;
  switch (r.tag) {
    case RegimeTag::A1:
      return {1.0 - p.beta, p.beta_hat, p.gamma, 1.0 - p.gamma, p.gamma_hat, 1.0 - p.gamma_hat};
    case RegimeTag::A2:
      return {p.beta - 1.0,
              2.0 - p.beta,
              p.beta_hat + 1.0,
              -p.beta_hat,
              1.0 - p.beta + p.beta_hat + p.gamma,
              1.0 - p.beta + p.beta_hat + p.gamma_hat};
    case RegimeTag::A3:
      return {p.beta,
              1.0 - p.beta,
              p.beta_hat + n + 1.0,
              -n - p.beta_hat,
              -(1.0 - p.beta + p.beta_hat + p.gamma_hat + n),
              1.0 - p.beta + p.beta_hat + p.gamma + n};
    case RegimeTag::A4:
      return {p.beta - n,
              n + 1.0 - p.beta,
              p.beta_hat,
              1.0 - p.beta_hat,
              n - p.beta + p.beta_hat + p.gamma_hat,
              -(n - p.beta + p.beta_hat + p.gamma)};
  }
  return {};
}

inline double eta(const HypParams& p) {
  return 1.0 - p.beta + p.beta_hat + p.gamma + p.gamma_hat;
}

inline DerivedParams derive(const HypParams& p) {
  classify(p);
  DerivedParams d;
  d.eta = eta(p);
  d.sigma_gaussian = 0.0;
  d.variation = (p.gamma + p.gamma_hat < 1.0) ? Variation::BoundedNoDrift : Variation::Unbounded;
  return d;
}

/// The quadruple whose exponent is z -> psi(-z).
inline HypParams dual(const HypParams& p) {
  return {1.0 - p.beta_hat, p.gamma_hat, 1.0 - p.beta, p.gamma};
}

}  // namespace hyplevy
