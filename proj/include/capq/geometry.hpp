#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "capq/radial_profile.hpp"

namespace capq {

inline constexpr double kPi = 3.14159265358979323846;

/// Schwarzschild conformal family u(r) = 1 + m/(2r) on r >= r_min; any mass
/// sign. For m < 0 the factor degenerates at r = |m|/2, so r_min must sit
/// strictly above it.
struct SchwarzschildSpec {
  double mass = 0.0;
  double r_min = 0.0;

  SchwarzschildSpec(double m, double rmin) : mass(m), r_min(rmin) {
    if (!(r_min > 0.0)) {
      throw std::invalid_argument("SchwarzschildSpec: r_min must be positive");
    }
    if (mass < 0.0 && !(r_min > 0.5 * std::abs(mass))) {
      throw std::invalid_argument(
          "SchwarzschildSpec: for m < 0 the metric degenerates at r = |m|/2; "
          "require r_min > |m|/2");
    }
  }

  /// Default inner radius: the horizon m/2 for m > 0.
  static SchwarzschildSpec with_mass(double m) {
    if (!(m > 0.0)) {
      throw std::invalid_argument(
          "SchwarzschildSpec::with_mass: nonpositive mass needs an explicit r_min");
    }
    return SchwarzschildSpec(m, 0.5 * m);
  }

  double u(double r) const { return 1.0 + 0.5 * mass / r; }
  double du(double r) const { return -0.5 * mass / (r * r); }
  double d2u(double r) const { return mass / (r * r * r); }
};

struct CoordinateSphere {
  double r0 = 0.0;
  explicit CoordinateSphere(double r) : r0(r) {
    if (!(r0 > 0.0)) throw std::invalid_argument("CoordinateSphere: r0 must be positive");
  }
};

/// Conformally flat rotationally symmetric metric g = u^4 g0 with u -> 1 at
/// rate r^-tau, tau in (1/2, 1].
struct RadialConformalMetric {
  RadialProfile u;
  double r_b = 0.0;   // inner domain radius
  double tau = 1.0;   // decay order

  RadialConformalMetric(RadialProfile profile, double inner_radius, double decay = 1.0)
      : u(std::move(profile)), r_b(inner_radius), tau(decay) {
    if (!(r_b > 0.0)) throw std::invalid_argument("RadialConformalMetric: r_b must be positive");
    if (!(tau > 0.5) || !(tau <= 1.0)) {
      throw std::invalid_argument("RadialConformalMetric: decay order tau must lie in (1/2, 1]");
    }
    // Light positivity scan of the conformal factor on the working range.
    const double hi = u.is_sampled() ? u.r_max() : 1e4 * r_b;
    for (int i = 0; i <= 64; ++i) {
      const double r = r_b * std::pow(hi / r_b, i / 64.0);
      if (!(u.value(r) > 0.0)) {
        throw std::invalid_argument("RadialConformalMetric: conformal factor must be positive");
      }
    }
  }

  static RadialConformalMetric schwarzschild(const SchwarzschildSpec& spec) {
    const double m = spec.mass;
    auto prof = RadialProfile::analytic(
        [m](double r) { return 1.0 + 0.5 * m / r; }, spec.r_min,
        [m](double r) { return -0.5 * m / (r * r); },
        [m](double r) { return m / (r * r * r); });
    return RadialConformalMetric(std::move(prof), spec.r_min);
  }

  static RadialConformalMetric flat(double r_b = 1e-3) {
    auto prof = RadialProfile::analytic([](double) { return 1.0; }, r_b,
                                        [](double) { return 0.0; },
                                        [](double) { return 0.0; });
    return RadialConformalMetric(std::move(prof), r_b);
  }

  /// Areal radius of the coordinate sphere {r}: h(r) = u(r)^2 r.
  double areal_radius(double r) const {
    const double uu = u.value(r);
    return uu * uu * r;
  }
};

/// Canonical warped-product form g = f^2 dr^2 + h^2 (round sphere); every
/// RadialConformalMetric converts with f = u^2, h = u^2 r.
struct WarpedProductMetric {
  RadialProfile f;  // radial lapse
  RadialProfile h;  // areal radius
  double r_b = 0.0;

  WarpedProductMetric(RadialProfile lapse, RadialProfile areal, double inner)
      : f(std::move(lapse)), h(std::move(areal)), r_b(inner) {
    if (!(r_b > 0.0)) throw std::invalid_argument("WarpedProductMetric: r_b must be positive");
  }
};

WarpedProductMetric to_warped(const RadialConformalMetric& metric);

// --- Pointwise quantities on coordinate spheres --------------------------

/// Area radius of {r = r0} in Schwarzschild: (1 + m/(2 r0))^2 r0.
double area_radius(const SchwarzschildSpec& spec, const CoordinateSphere& s);

/// Mean curvature of {r = r0} in Schwarzschild with respect to the unit
/// normal pointing to the distinguished end:
/// 2 (1 + m/(2 r0))^-3 (1 - m/(2 r0)) / r0.
double mean_curvature_sphere(const SchwarzschildSpec& spec, const CoordinateSphere& s);

/// Mean curvature of the round sphere of area radius r_A embedded in flat
/// space: 2 / r_A.
double euclidean_mean_curvature_round(double r_A);

/// Same quantities for a general radial conformal metric.
double area_radius(const RadialConformalMetric& metric, double r0);
double mean_curvature_sphere(const RadialConformalMetric& metric, double r0);

/// Scalar curvature R(u^4 g0) = -8 u^-5 (u'' + 2 u'/r).
double scalar_curvature_radial(const RadialConformalMetric& metric, double r);

/// ADM mass 2a, a = lim r (u - 1), by a three-radius Richardson fit at
/// {R, 2R, 4R} that absorbs 1/r and 1/r^2 corrections exactly; the fitted
/// model is checked at 8R and a large residual throws.
double adm_mass(const RadialConformalMetric& metric, double fit_tol = 1e-6);

/// Outermost root of d/dr [u(r)^2 r] = 0 (bracket scan on 512 log-spaced
/// points, then bisection to 1e-12), or nullopt if no sign change is found.
std::optional<double> locate_horizon(const RadialConformalMetric& metric);

/// Kelvin inversion y = x/|x|^2: pulled-back conformal factor
/// v(s) = u(1/s) / s on (0, 1/r_b]; the inverted metric is v^4 g0.
RadialProfile kelvin_invert(const RadialConformalMetric& metric);

}  // namespace capq
