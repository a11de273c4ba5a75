#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "capq/geometry.hpp"
#include "capq/spline.hpp"

namespace capq {

/// Thrown when a Lambda value is requested for a metric without positive
/// Gauss curvature (no computable closed form in that case).
struct LambdaUnavailable : std::domain_error {
  using std::domain_error::domain_error;
};

/// Abstract metric ds^2 + rho(s)^2 dtheta^2 of a closed surface of revolution:
/// rho > 0 on (0, L), rho(0) = rho(L) = 0, rho'(0) = 1, rho'(L) = -1.
class RevolutionSurfaceMetric {
 public:
  /// Round sphere of radius r_A: rho(s) = r_A sin(s / r_A).
  static RevolutionSurfaceMetric round(double r_A);

  /// Induced metric of the spheroid with semi-axes (a, a, c) in flat space.
  static RevolutionSurfaceMetric spheroid(double a, double c);

  /// Splined samples rho_i at strictly increasing s_i covering [0, L];
  /// endpoint closure (rho -> 0, |rho'| -> 1) is validated to end_tol.
  static RevolutionSurfaceMetric from_samples(std::vector<double> s,
                                              std::vector<double> rho,
                                              double end_tol = 1e-4);

  double length() const { return L_; }
  double rho(double s) const;
  double drho(double s) const;
  double d2rho(double s) const;

  /// Gauss curvature K(s) = -rho''/rho, with pole values taken as interior
  /// limits.
  double gauss_curvature(double s) const;
  double min_gauss_curvature(int n_scan = 4096) const;

  /// Quadrature of K over the surface; equals 4 pi for any closed profile.
  double integral_gauss_curvature(int n_panels = 2048) const;

  bool is_round() const { return kind_ == Kind::Round; }
  double round_radius() const { return round_radius_; }

 private:
  enum class Kind { Round, Spheroid, Sampled };
  Kind kind_ = Kind::Sampled;
  double L_ = 0.0;
  double round_radius_ = 0.0;
  double sph_a_ = 0.0, sph_c_ = 0.0;
  std::shared_ptr<CubicSpline> v_of_s_;  // spheroid parameter inversion
  std::shared_ptr<CubicSpline> rho_spline_;
};

/// Isometric embedding of a revolution metric into flat 3-space, stored as
/// the arclength meridian (rho(s), z(s)) with rho'^2 + z'^2 = 1.
class EmbeddedRevolutionSurface {
 public:
  const RevolutionSurfaceMetric& source() const { return metric_; }
  double length() const { return metric_.length(); }
  double rho(double s) const { return metric_.rho(s); }
  double dz(double s) const;  // z'(s) = sqrt(1 - rho'^2)
  double z(double s) const;
  double height() const { return z(length()) - z(0.0); }

  friend EmbeddedRevolutionSurface embed_revolution(const RevolutionSurfaceMetric&);

 private:
  explicit EmbeddedRevolutionSurface(RevolutionSurfaceMetric m) : metric_(std::move(m)) {}
  RevolutionSurfaceMetric metric_;
  std::shared_ptr<CubicSpline> z_spline_;
};

/// z(s) = int_0^s sqrt(1 - rho'^2). Throws if |rho'| > 1 anywhere (the metric
/// is not embeddable as a surface of revolution; general convex embedding is
/// not attempted).
EmbeddedRevolutionSurface embed_revolution(const RevolutionSurfaceMetric& m);

/// Recompute the revolution metric induced by the embedded meridian
/// (consistency oracle for the embedding round trip).
RevolutionSurfaceMetric induced_revolution_metric(const EmbeddedRevolutionSurface& e,
                                                  int n_samples = 4096);

/// int H_{g0} dsigma over the embedded surface, computed from the tangent
/// angle form 2 pi * int (z' - omega rho') ds, which avoids second
/// derivatives of the profile.
double total_euclidean_mean_curvature(const EmbeddedRevolutionSurface& e,
                                      int n_panels = 4096);

/// Lambda(Sigma, gamma) = (1/8pi) int H_{g0} for spheres of positive Gauss
/// curvature; throws LambdaUnavailable otherwise.
double lambda_invariant(const RevolutionSurfaceMetric& m);

/// sqrt(area/16pi) (1 - (1/16pi) int H^2 dsigma).
double hawking_mass(double area, double total_H_sq);

/// (1/8pi) (int H_{g0} - int H_g); the embedding must exist.
double brown_york_mass(const RevolutionSurfaceMetric& m, double total_H_g);

// --- Axisymmetric surfaces inside a radial conformal metric ---------------

/// Meridian curve theta in [0, pi] -> r(theta) > 0 describing a closed
/// axisymmetric surface; smooth with vanishing slope at the poles.
struct MeridianCurve {
  std::function<double(double)> r_of_theta;

  static MeridianCurve sphere(double r0) {
    return MeridianCurve{[r0](double) { return r0; }};
  }
  /// From a profile in mu = cos(theta).
  static MeridianCurve from_mu_profile(std::function<double(double)> r_of_mu) {
    return MeridianCurve{[f = std::move(r_of_mu)](double theta) { return f(std::cos(theta)); }};
  }
  /// Ellipsoid x^2/a^2 + y^2/a^2 + z^2/c^2 = 1 about the axis.
  static MeridianCurve ellipsoid(double a, double c);

  double operator()(double theta) const { return r_of_theta(theta); }
  double dr(double theta) const;   // dr/dtheta, Richardson central difference
  double d2r(double theta) const;
};

/// Restriction of g = u^4 g0 to the surface of revolution traced by the
/// meridian curve, reparametrized by metric arclength. Coordinate spheres are
/// recognized and returned in closed form.
RevolutionSurfaceMetric induced_metric(const RadialConformalMetric& metric,
                                       const MeridianCurve& curve,
                                       int n_samples = 8192);

enum class NormalConvention { TowardInfinity, CompactSide };

/// Area, mean-curvature integrals and the three quasi-local quantities for a
/// closed axisymmetric surface.
struct QuasiLocalReport {
  double area = 0.0;
  double area_radius = 0.0;
  double total_H_g = 0.0;                 // int H_g dsigma
  double total_H_sq_g = 0.0;              // int H_g^2 dsigma
  std::optional<double> total_H_g0;       // int H_{g0} dsigma, iff embeddable
  double hawking = 0.0;
  std::optional<double> brown_york;
  std::optional<double> lambda;           // present iff K > 0 everywhere
  double min_gauss = 0.0;
  NormalConvention normal = NormalConvention::TowardInfinity;
};

QuasiLocalReport quasilocal_report(const RadialConformalMetric& metric,
                                   const MeridianCurve& curve,
                                   NormalConvention normal = NormalConvention::TowardInfinity,
                                   int n_samples = 4096);

/// Closed-form path for coordinate spheres.
QuasiLocalReport quasilocal_report_sphere(const RadialConformalMetric& metric, double r0,
                                          NormalConvention normal = NormalConvention::TowardInfinity);

/// Flat mean curvature H_{g0} of the meridian surface at angle theta
/// (outward normal), and the ambient H_g = u^-2 (H_0 + 4 dnu log u).
double flat_mean_curvature(const MeridianCurve& curve, double theta);
double ambient_mean_curvature(const RadialConformalMetric& metric,
                              const MeridianCurve& curve, double theta);

/// Metric area 2 pi int u^4 r sin(theta) dl_0, and the signed flat-region
/// volume integral int u^6 dV_0 between the inner sphere {r_inner} and the
/// surface (negative where the surface dips inside).
double surface_area(const RadialConformalMetric& metric, const MeridianCurve& curve,
                    int n_panels = 4096);
double enclosed_volume(const RadialConformalMetric& metric, const MeridianCurve& curve,
                       double r_inner, int n_panels = 4096);

}  // namespace capq
