#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace capq::quad {

/// Adaptive Gauss--Kronrod on a finite interval.
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12,
                 double* err_out = nullptr) {
  double err = 0.0;
  const double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, 15, rel_tol, &err);
  if (err_out != nullptr) {
    *err_out = err;
  }
  return val;
}

/// Improper integral over [a, inf) with the tail substitution t = 1/r,
/// so that \int_a^inf f(r) dr = \int_0^{1/a} f(1/t) / t^2 dt.
/// Throws if the substituted integrand is not finite near t = 0 (integrand
/// decaying slower than 1/r^2, i.e. a divergent tail).
template <typename F>
double integrate_to_infinity(F&& f, double a, double rel_tol = 1e-12,
                             double* err_out = nullptr) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("integrate_to_infinity: lower bound must be > 0");
  }
  auto sub = [&f](double t) { return f(1.0 / t) / (t * t); };
  // Probe the substituted integrand near t = 0: a divergent tail shows up as a
  // blow-up of f(1/t)/t^2.
  const double probe_small = sub(1e-14 * (1.0 / a));
  const double probe_ref = sub(0.5 / a);
  if (!std::isfinite(probe_small) ||
      std::abs(probe_small) > 1e10 * (std::abs(probe_ref) + 1.0)) {
    throw std::domain_error("integrate_to_infinity: divergent tail integral");
  }
  double err = 0.0;
  const double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      sub, 0.0, 1.0 / a, 15, rel_tol, &err);
  if (err_out != nullptr) {
    *err_out = err;
  }
  return val;
}

/// Bisection for a continuous monotone-sign-change problem. Requires
/// f(lo) and f(hi) of opposite sign; refines to |hi-lo| <= tol * max(1,|root|).
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-13,
              int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument("bisect: endpoints do not bracket a root");
  }
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (fhi > 0.0)) {
      hi = mid;
      fhi = fmid;
    } else {
      lo = mid;
      flo = fmid;
    }
    if (hi - lo <= tol * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace capq::quad
