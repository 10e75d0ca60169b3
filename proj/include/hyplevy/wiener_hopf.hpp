#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "hyplevy/errors.hpp"
#include "hyplevy/exponent.hpp"
#include "hyplevy/lattice.hpp"
#include "hyplevy/params.hpp"
#include "hyplevy/special_functions.hpp"

namespace hyplevy {

enum class Side { Ascending, Descending };

inline std::string_view to_string(Side s) { return s == Side::Ascending ? "ascending" : "descending"; }

/// lambda -> Gamma(num_offset + lambda) / Gamma(den_offset + lambda)
struct GammaRatio {
  double num_offset = 0.0;
  double den_offset = 0.0;
};

/// lambda -> (root_shift + lambda) / (pole_shift + lambda); a missing part is 1.
struct LinearFactor {
  std::optional<double> root_shift;
  std::optional<double> pole_shift;
};

struct WienerHopfFactor {
  Side side = Side::Ascending;
  GammaRatio gamma_ratio;
  std::vector<LinearFactor> linear_factors;
};

namespace detail {

inline bool same_point(double a, double b) { return std::abs(a - b) <= kCoincidenceTolerance; }

// One cancellation step; returns false when nothing applies.
inline bool normalize_step(WienerHopfFactor& f) {
  auto& g = f.gamma_ratio;
  auto& lf = f.linear_factors;
  // root against pole, possibly across different linear factors
  for (auto& a : lf) {
    if (!a.root_shift) continue;
    for (auto& b : lf) {
      if (b.pole_shift && same_point(*a.root_shift, *b.pole_shift)) {
        a.root_shift.reset();
        b.pole_shift.reset();
        return true;
      }
    }
  }
  for (auto& a : lf) {
    if (a.pole_shift && same_point(*a.pole_shift, g.den_offset)) {
      a.pole_shift.reset();
      g.den_offset += 1.0;
      return true;
    }
    if (a.root_shift && same_point(*a.root_shift, g.num_offset)) {
      a.root_shift.reset();
      g.num_offset += 1.0;
      return true;
    }
    if (a.root_shift && same_point(*a.root_shift, g.den_offset - 1.0)) {
      a.root_shift.reset();
      g.den_offset -= 1.0;
      return true;
    }
    if (a.pole_shift && same_point(*a.pole_shift, g.num_offset - 1.0)) {
      a.pole_shift.reset();
      g.num_offset -= 1.0;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Removes coinciding root/pole pairs and absorbs linear factors adjacent to
/// the Gamma offsets into the ratio. Value-preserving.
inline WienerHopfFactor normalize(WienerHopfFactor f) {
  while (detail::normalize_step(f)) {
  }
  std::erase_if(f.linear_factors,
                [](const LinearFactor& l) { return !l.root_shift && !l.pole_shift; });
  return f;
}

/// Ascending and descending factors for the regime of p.
inline std::pair<WienerHopfFactor, WienerHopfFactor> build_factors(const HypParams& p) {
  const Regime r = classify(p);
  const double n = r.shift_n;
  WienerHopfFactor up{Side::Ascending, {}, {}};
  WienerHopfFactor down{Side::Descending, {}, {}};
  switch (r.tag) {
    case RegimeTag::A1:
      up.gamma_ratio = {1.0 - p.beta + p.gamma, 1.0 - p.beta};
      down.gamma_ratio = {p.beta_hat + p.gamma_hat, p.beta_hat};
      break;
    case RegimeTag::A2:
      up.gamma_ratio = {1.0 - p.beta + p.gamma, 2.0 - p.beta};
      up.linear_factors.push_back({-p.beta_hat, std::nullopt});
      down.gamma_ratio = {p.beta_hat + p.gamma_hat, 1.0 + p.beta_hat};
      down.linear_factors.push_back({p.beta - 1.0, std::nullopt});
      break;
    case RegimeTag::A3:
      up.gamma_ratio = {1.0 - p.beta + p.gamma, 1.0 - p.beta};
      for (int j = 0; j <= r.shift_n; ++j) {
        up.linear_factors.push_back({-p.beta_hat - j, -p.beta_hat - p.gamma_hat - j});
      }
      down.gamma_ratio = {n + 1.0 + p.beta_hat + p.gamma_hat, n + 1.0 + p.beta_hat};
      break;
    case RegimeTag::A4:
      up.gamma_ratio = {1.0 + n - p.beta + p.gamma, 1.0 + n - p.beta};
      down.gamma_ratio = {p.beta_hat + p.gamma_hat, p.beta_hat};
      for (int j = 1; j <= r.shift_n; ++j) {
        down.linear_factors.push_back({p.beta - j, p.beta - p.gamma - j});
      }
      break;
  }
  return {normalize(std::move(up)), normalize(std::move(down))};
}

/// Factor value at complex lambda.
/// Throws PoleError at a pole of the numerator Gamma or of a linear denominator.
inline Complex eval_factor(const WienerHopfFactor& f, Complex lambda) {
  const Complex num = f.gamma_ratio.num_offset + lambda;
  const Complex den = f.gamma_ratio.den_offset + lambda;
  if (detail::distance_to_pole(num) < kPoleTolerance) {
    throw PoleError("eval_factor: Gamma numerator at a pole");
  }
  Complex linear(1.0, 0.0);
  for (const auto& l : f.linear_factors) {
    if (l.pole_shift) {
      const Complex d = *l.pole_shift + lambda;
      if (std::abs(d) < kPoleTolerance) throw PoleError("eval_factor: linear factor at a pole");
      linear /= d;
    }
    if (l.root_shift) linear *= *l.root_shift + lambda;
  }
  if (detail::distance_to_pole(den) < kPoleTolerance) return {0.0, 0.0};
  return linear * std::exp(detail::log_gamma_unchecked(num) - detail::log_gamma_unchecked(den));
}

inline double eval_factor(const WienerHopfFactor& f, double lambda) {
  return eval_factor(f, Complex(lambda, 0.0)).real();
}

/// lambda / kappa(lambda) as a factor of the same shape.
inline WienerHopfFactor conjugate(const WienerHopfFactor& f) {
  WienerHopfFactor c{f.side, {f.gamma_ratio.den_offset, f.gamma_ratio.num_offset}, {}};
  for (const auto& l : f.linear_factors) c.linear_factors.push_back({l.pole_shift, l.root_shift});
  c.linear_factors.push_back({0.0, std::nullopt});
  return normalize(std::move(c));
}

/// Zeros and poles of the factor in lambda <= 0, as magnitudes, first `count` of each.
/// For the ascending factor these are the positive roots/poles of psi, for
/// the descending one the negative ones (plus a root at 0 if q = 0).
struct FactorSingularities {
  std::vector<double> zeros;
  std::vector<double> poles;
};

inline FactorSingularities factor_singularities(const WienerHopfFactor& f, int count) {
  std::vector<double> zeros;
  std::vector<double> poles;
  const int span = count + static_cast<int>(f.linear_factors.size()) + 2;
  for (int k = 0; k < span; ++k) {
    zeros.push_back(f.gamma_ratio.den_offset + k);
    poles.push_back(f.gamma_ratio.num_offset + k);
  }
  for (const auto& l : f.linear_factors) {
    if (l.root_shift) zeros.push_back(*l.root_shift);
    if (l.pole_shift) poles.push_back(*l.pole_shift);
  }
  std::sort(zeros.begin(), zeros.end());
  std::sort(poles.begin(), poles.end());
  FactorSingularities out;
  std::vector<bool> pole_used(poles.size(), false);
  for (double z : zeros) {
    bool cancelled = false;
    for (std::size_t i = 0; i < poles.size(); ++i) {
      if (!pole_used[i] && detail::same_point(z, poles[i])) {
        pole_used[i] = true;
        cancelled = true;
        break;
      }
    }
    if (!cancelled && z >= -kCoincidenceTolerance) out.zeros.push_back(std::max(z, 0.0));
  }
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (!pole_used[i] && poles[i] > 0.0) out.poles.push_back(poles[i]);
  }
  if (out.zeros.size() > static_cast<std::size_t>(count)) out.zeros.resize(count);
  if (out.poles.size() > static_cast<std::size_t>(count)) out.poles.resize(count);
  return out;
}

struct FactorizationReport {
  double max_relative_error = 0.0;
  std::vector<double> skipped;  // grid points next to a pole of psi
};

/// max over theta of |psi(i theta) + kappa(-i theta) kappa_hat(i theta)| / (1 + |psi(i theta)|).
inline FactorizationReport factorization_report(const HypParams& p, std::span<const double> grid) {
  const auto [up, down] = build_factors(p);
  FactorizationReport rep;
  for (double theta : grid) {
    const Complex z(0.0, theta);
    try {
      const Complex lhs = psi(p, z);
      const Complex rhs = eval_factor(up, -z) * eval_factor(down, z);
      const double err = std::abs(lhs + rhs) / (1.0 + std::abs(lhs));
      if (!(err <= rep.max_relative_error)) rep.max_relative_error = std::isnan(err) ? INFINITY : err;
    } catch (const PoleError&) {
      rep.skipped.push_back(theta);
    }
  }
  return rep;
}

inline double verify_factorization(const HypParams& p, std::span<const double> grid) {
  return factorization_report(p, grid).max_relative_error;
}

inline BernsteinCertificate bernstein_certificate(const WienerHopfFactor& f, int orders,
                                                  std::span<const double> grid) {
  return bernstein_certificate([&f](double x) { return eval_factor(f, x); }, orders, grid);
}

inline bool certify_bernstein(const WienerHopfFactor& f, int orders, std::span<const double> grid) {
  return bernstein_certificate(f, orders, grid).passed;
}

}  // namespace hyplevy
