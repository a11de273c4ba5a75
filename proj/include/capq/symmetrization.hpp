#pragma once

#include <optional>
#include <string>

#include "capq/level_sets.hpp"

namespace capq {

/// Rotationally symmetric isoperimetric profile: maps the signed volume
/// enclosed against the inner reference sphere (the horizon for positive
/// mass) to the coordinate radius and area of the symmetric sphere with that
/// volume. For non-Schwarzschild profiles the caller asserts the
/// isoperimetric-foliation hypothesis; the necessary condition that
/// coordinate-sphere area grows with enclosed volume is checked.
class IsoperimetricProfile {
 public:
  IsoperimetricProfile(RadialConformalMetric metric, double r_reference,
                       bool foliation_asserted = false);

  static IsoperimetricProfile schwarzschild(double mass);

  const RadialConformalMetric& metric() const { return metric_; }
  double r_reference() const { return r_reference_; }

  /// Signed volume between {r0} and the reference sphere (negative inside).
  double signed_volume(double r0) const;
  /// Coordinate radius of the symmetric sphere enclosing volume V
  /// (bisection to 1e-10); throws below the attainable infimum.
  double radius_for_volume(double V) const;
  /// Area of the symmetric sphere at volume V.
  double area_for_volume(double V) const;
  /// Capacity of the symmetric sphere: closed form r0* + m/2 for
  /// Schwarzschild, radial quadrature otherwise.
  double capacity_for_volume(double V) const;

 private:
  RadialConformalMetric metric_;
  double r_reference_;
  std::optional<double> schwarzschild_mass_;
  double volume_floor_ = 0.0;  // V(r -> 0+) limit when the puncture is reachable
};

double signed_volume_schwarzschild(double m, double r0);

/// Symmetric counterpart of a closed surface: the coordinate sphere with the
/// same signed volume.
CoordinateSphere symmetric_counterpart(const IsoperimetricProfile& profile, double V);

/// The rearrangement inequality chain of the capacity energy:
///   int |Sigma_t*|^2 / V' dt  <=  int |Sigma_t|^2 / V' dt  <=  4 pi C.
struct SymmetrizationResult {
  double original_capacity = 0.0;
  double symmetrized_capacity = 0.0;
  double energy_symmetrized = 0.0;  // int |Sigma*_t|^2 / V'(t) dt
  double energy_rearranged = 0.0;   // int |Sigma_t|^2 / V'(t) dt
  double energy_dirichlet = 0.0;    // 4 pi * capacity
  double gap = 0.0;                 // C(Sigma) - C(Sigma*)
  double chain_tolerance = 0.0;
  bool chain_monotone = false;
};

/// Evaluates the chain from extracted level sets (>= 32 regular thresholds).
/// V'(t) comes from monotone-spline differentiation of the volume samples,
/// cross-validated against the coarea integrals; a mismatch beyond
/// vprime_check_tol or non-monotone volumes throw.
SymmetrizationResult rearranged_energy(const CapacitySolution& sol, const LevelSetData& levels,
                                       const IsoperimetricProfile& profile,
                                       double vprime_check_tol = 0.08);

/// Capacity comparison against the symmetric counterpart with the same
/// signed volume: lhs = C(Sigma) (from the solve), rhs = C(Sigma*).
/// The report's gap is lhs - rhs, nonnegative up to grid error.
struct CapacityComparisonReport {
  double capacity = 0.0;
  double capacity_symmetrized = 0.0;
  double volume = 0.0;
  double r_star = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
};

CapacityComparisonReport szego_schwarzschild_compare(const CapacitySolution& sol,
                                                     const IsoperimetricProfile& profile);

/// Flat-space lower bound (3 V / 4 pi)^(1/3) of the capacity.
double pfs_flat_bound(double volume);

}  // namespace capq
