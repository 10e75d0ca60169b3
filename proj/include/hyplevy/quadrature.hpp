#pragma once

// Thin wrappers over Boost.Math quadrature so the rest of the library does
// not depend on its calling conventions.

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace hyplevy::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
};

/// Adaptive Gauss-Kronrod (61 points) on [a, b] for smooth integrands.
template <class Fn>
Result gauss_kronrod(Fn&& f, double a, double b, double rel_tol = 1e-10, unsigned max_depth = 15) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, max_depth, rel_tol, &err);
  return {v, err};
}

/// Double-exponential rule on [a, b]; tolerates integrable endpoint singularities.
template <class Fn>
Result tanh_sinh(Fn&& f, double a, double b, double rel_tol = 1e-10) {
  // integrate() is not const-callable in Boost 1.74.
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  double err = 0.0;
  double l1 = 0.0;
  const double v = rule.integrate(f, a, b, rel_tol, &err, &l1);
  return {v, err};
}

}  // namespace hyplevy::quad
