#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "capq/geometry.hpp"

namespace capq {

struct FluxSample {
  double radius = 0.0;  // extraction radius (coordinate); for meridian solves,
                        // the mean radius of the extraction surface
  double value = 0.0;   // (1/4pi) * flux, i.e. a capacity estimate
};

class MeridianField;  // defined in meridian_solver.hpp

/// Radial capacity potential phi(r) = T(r)/T(r0), T(r) = \int_r^inf f/h^2.
struct RadialPotential {
  WarpedProductMetric metric;
  double r0 = 0.0;       // boundary coordinate radius
  double tail_T0 = 0.0;  // T(r0); capacity = 1/T0

  double phi(double r) const;
  /// d(phi)/dr (coordinate derivative).
  double dphi_dr(double r) const;
  /// |grad phi|_g = |phi'| / f.
  double grad_norm(double r) const;
};

/// A solved boundary capacity potential: phi = 1 on the boundary, 0 < phi < 1
/// inside, phi -> 0 at infinity; capacity equals the flux (1/4pi) oint
/// d(phi)/d(eta) through any surface homologous to the boundary.
struct CapacitySolution {
  double capacity = 0.0;
  std::optional<RadialPotential> radial;
  std::shared_ptr<const MeridianField> meridian;
  std::vector<FluxSample> flux_samples;
  double flux_spread = 0.0;          // max relative deviation across samples
  double asymptotic_coefficient = 0.0;  // C in phi ~ C/|x|
  double grid_error = 0.0;           // estimated numerical error on capacity
};

/// Capacity of the coordinate sphere {r0} in a warped-product metric by exact
/// quadrature of the radial ODE (h^2/f phi')' = 0: capacity = [T(r0)]^{-1}.
/// The tail integral uses the substitution t = 1/r. Throws on a divergent
/// tail (non-asymptotically-flat input).
CapacitySolution capacity_radial(const WarpedProductMetric& metric, double r0,
                                 double quad_tol = 1e-12);

/// Closed form r0 * u(r0) for harmonically flat profiles (Delta_0 u = 0);
/// the profile is gated by a scalar-curvature check at tolerance 1e-10 and
/// non-harmonically-flat inputs throw.
double capacity_harmonically_flat(const RadialConformalMetric& metric, double r0,
                                  double harmonic_tol = 1e-10);

/// Pointwise boundary data for the capacity inequalities: |grad phi|_g, the
/// ambient mean curvature H_g (normal toward the distinguished end), and the
/// derived potential u = (2 - phi)/2 with |grad log u|_g, sampled along the
/// boundary (a single sample for radial solutions).
struct BoundaryGradientData {
  std::vector<double> mu;           // sampling parameter (cos theta); {0} for radial
  std::vector<double> grad_phi_g;
  std::vector<double> mean_curvature_g;
  std::vector<double> grad_log_u_g;
  bool hypothesis_H_lt_4grad = false;   // H_g < 4 |grad phi| everywhere
  bool hypothesis_H_gt_m4gradlog = false;  // H_g > -4 |grad log u| everywhere
};

BoundaryGradientData boundary_gradient(const CapacitySolution& sol,
                                       const RadialConformalMetric& metric);

/// Least-squares fit of r * phi(r) over the outer decade of the solved
/// domain; must agree with the flux capacity within 1e-3 relative, else
/// throws.
double asymptotic_fit(const CapacitySolution& sol, double agree_tol = 1e-3);

/// Linear least squares for samples f(r) = C + D/r; returns C.
double fit_inverse_radius_model(const std::vector<double>& r, const std::vector<double>& f);

}  // namespace capq
