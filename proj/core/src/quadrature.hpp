#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "bbmsel/errors.hpp"

namespace bbmsel::detail {

/// Adaptive Gauss-Kronrod; throws NumericError when the error estimate misses tol.
template <class F>
double integrate(F&& f, double lo, double hi, double rel_tol, const char* what,
                 double abs_floor = 1e-300) {
  double err = 0.0;
  double l1 = 0.0;
  // Boost reports leaf errors in [-1, 1] units, so short windows would look inaccurate
  // and be bisected to max depth. Integrating over [0, 1] keeps both on the same scale.
  const double w = hi - lo;
  auto g = [&](double s) { return w * f(lo + w * s); };
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      g, 0.0, 1.0, 20, rel_tol, &err, &l1);
  if (!std::isfinite(v)) throw NumericError(std::string(what) + ": non-finite quadrature", err);
  if (err > 1e3 * rel_tol * l1 + abs_floor) throw NumericError(std::string(what) + ": quadrature tolerance missed", err);
  return v;
}

/// Integral over [0, hi] of a kernel with at most a 1/sqrt(s) singularity at 0, via s = u^2.
template <class F>
double integrate_from_zero(F&& f, double hi, double rel_tol, const char* what, double abs_floor = 1e-300) {
  auto g = [&](double u) { return u <= 0 ? 0.0 : 2.0 * u * f(u * u); };
  return integrate(g, 0.0, std::sqrt(hi), rel_tol, what, abs_floor);
}

}  // namespace bbmsel::detail
