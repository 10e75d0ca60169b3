#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "hyplevy/params.hpp"

namespace fixtures {

using hyplevy::HypParams;
using hyplevy::RegimeTag;

inline constexpr HypParams kA1{0.9, 0.5, 0.2, 0.3};
inline constexpr HypParams kA2{1.1, 0.5, -0.2, 0.8};
inline constexpr HypParams kA3{0.8, 0.4, -1.5, 0.1};
inline constexpr HypParams kA4{2.7, 0.2, 0.3, 0.5};
// Printed with beta_hat = -1.9; outside every regime.
inline constexpr HypParams kA3Misprint{0.8, 0.4, -1.9, 0.1};

inline const std::vector<HypParams>& worked() {
  static const std::vector<HypParams> all = {kA1, kA2, kA3, kA4};
  return all;
}

inline bool relative_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300);
}

/// Uniform draw from the interior of a regime, by rejection on classify.
inline HypParams random_params(RegimeTag tag, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> shape(0.05, 0.95);
  for (;;) {
    HypParams p;
    p.gamma = shape(rng);
    p.gamma_hat = shape(rng);
    int n = 0;
    switch (tag) {
      case RegimeTag::A1:
        p.beta = -2.0 + 3.0 * unit(rng);
        p.beta_hat = 3.0 * unit(rng);
        break;
      case RegimeTag::A2:
        p.beta = 1.0 + unit(rng);
        p.beta_hat = -unit(rng);
        break;
      case RegimeTag::A3:
        n = static_cast<int>(3 * unit(rng));
        p.beta = unit(rng);
        p.beta_hat = -n - unit(rng);
        break;
      case RegimeTag::A4:
        n = 1 + static_cast<int>(3 * unit(rng));
        p.beta_hat = unit(rng);
        p.beta = n + unit(rng);
        break;
    }
    try {
      if (hyplevy::classify(p).tag == tag) return p;
    } catch (const hyplevy::OutOfDomainError&) {
    }
  }
}

inline std::vector<HypParams> random_sets(RegimeTag tag, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<HypParams> out;
  for (int i = 0; i < count; ++i) out.push_back(random_params(tag, rng));
  return out;
}

inline std::vector<HypParams> random_sets_all(int per_regime, std::uint64_t seed) {
  std::vector<HypParams> out;
  for (auto tag : {RegimeTag::A1, RegimeTag::A2, RegimeTag::A3, RegimeTag::A4}) {
    auto part = random_sets(tag, per_regime, seed + static_cast<std::uint64_t>(tag));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return g;
}

}  // namespace fixtures
