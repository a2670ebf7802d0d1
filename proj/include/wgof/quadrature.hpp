#pragma once

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace wgof {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  ///< absolute error estimate
};

/// Adaptive bisection on a 31-point Gauss-Kronrod rule with an absolute
/// tolerance. Subintervals stop splitting once their share of the
/// tolerance is met or `max_depth` is reached; the summed error estimate
/// is returned so callers can reject unconverged results.
template <typename F>
QuadratureResult integrate_abs(F&& f, double lo, double hi, double abs_tolerance, int max_depth = 30) {
  if (!(hi > lo)) {
    return {};
  }
  double unit_error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 0, 0.0, &unit_error);
  const double error = unit_error * 0.5 * (hi - lo);
  if (error <= abs_tolerance || max_depth == 0) {
    return {value, error};
  }
  const double mid = 0.5 * (lo + hi);
  const auto left = integrate_abs(f, lo, mid, 0.5 * abs_tolerance, max_depth - 1);
  const auto right = integrate_abs(f, mid, hi, 0.5 * abs_tolerance, max_depth - 1);
  return {left.value + right.value, left.error + right.error};
}

}  // namespace wgof
