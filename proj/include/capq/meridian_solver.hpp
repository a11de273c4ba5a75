#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "capq/capacity.hpp"
#include "capq/revolution.hpp"

namespace capq {

/// Exterior domain of an axisymmetric boundary surface inside a radial
/// conformal metric, truncated at a far sphere where the leading-order decay
/// is imposed as a Robin condition.
struct AxisymDomainSpec {
  MeridianCurve boundary;
  RadialConformalMetric metric;
  double truncation_radius = 0.0;
  int n_radial = 0;   // cells in the blended log-r direction
  int n_angular = 0;  // cells in theta
  double cg_tol = 1e-12;

  AxisymDomainSpec(MeridianCurve curve, RadialConformalMetric m, double r_trunc,
                   int n_rad, int n_ang);

  double max_boundary_radius() const;
};

/// Solved meridian field phi on the boundary-fitted grid
///   log r(xi, theta) = (1 - xi) log r_b(theta) + xi log R_trunc,
/// nodes uniform in (xi, theta).
class MeridianField {
 public:
  int n_xi = 0, n_theta = 0;   // cell counts
  std::vector<double> xi;      // n_xi + 1 node coordinates
  std::vector<double> theta;   // n_theta + 1 node coordinates
  std::vector<double> phi;     // (n_xi+1) x (n_theta+1) row-major (xi-major)
  double truncation_radius = 0.0;
  MeridianCurve boundary;
  RadialConformalMetric metric;
  double capacity_flux = 0.0;    // mean of extraction-surface fluxes
  double capacity_energy = 0.0;  // Dirichlet-energy route
  std::vector<FluxSample> flux_samples;
  double flux_spread = 0.0;
  double grid_error = 0.0;
  int cg_iterations = 0;

  MeridianField(MeridianCurve curve, RadialConformalMetric m)
      : boundary(std::move(curve)), metric(std::move(m)) {}

  double node(int i, int j) const { return phi[static_cast<std::size_t>(i) * (n_theta + 1) + j]; }
  double r_of(double xi_v, double theta_v) const;
  /// Bilinear interpolation of phi at (xi, theta).
  double phi_at(double xi_v, double theta_v) const;
  /// Flat-gradient components (phi_r, phi_theta at fixed r) by centered
  /// differences on the grid, interpolated to (xi, theta).
  void flat_gradient(double xi_v, double theta_v, double& dphi_dr, double& dphi_dtheta) const;
  /// min/max of phi over interior nodes (maximum-principle diagnostics).
  std::pair<double, double> interior_range() const;
};

/// Solves div(u^2 grad phi) = 0 (the Laplace--Beltrami equation of u^4 g0)
/// with phi = 1 on the boundary curve and the Robin closure
/// d(phi)/dr + phi/r = 0 at the truncation sphere. The discretization is the
/// P1 energy form on the triangulated fitted grid (symmetric positive
/// definite); the system is solved by preconditioned conjugate gradients with
/// a deterministic iteration order. Capacity is flux-extracted on >= 4
/// interior surfaces and cross-checked against the energy route.
CapacitySolution capacity_axisym_fd(const AxisymDomainSpec& domain);

BoundaryGradientData boundary_gradient_meridian(const MeridianField& field,
                                                const RadialConformalMetric& metric);
double asymptotic_fit_meridian(const MeridianField& field);

/// Doubles the truncation radius and re-solves at the same resolution;
/// returns |C - C_doubled| as an estimate of the truncation error.
double truncation_error_estimate(const AxisymDomainSpec& domain);

/// Binary grid snapshot: header (magic, dims, truncation, metric hash), then
/// theta axis, xi axis, row-major r values and row-major phi values as 64-bit
/// floats. CSV export carries (rho = 1/r, mu = cos theta, r, theta, phi) rows.
void save_meridian_binary(const MeridianField& field, const std::string& path);
void save_meridian_csv(const MeridianField& field, const std::string& path);
/// Reads back dims/truncation/axes/values; boundary and metric are not
/// reconstructed (hash recorded for identification).
struct MeridianSnapshot {
  std::int64_t n_xi = 0, n_theta = 0;
  double truncation_radius = 0.0;
  std::uint64_t metric_hash = 0;
  std::vector<double> theta, xi, r, phi;
};
MeridianSnapshot load_meridian_binary(const std::string& path);
std::uint64_t metric_hash(const RadialConformalMetric& metric);

}  // namespace capq
