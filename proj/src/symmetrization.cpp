#include "capq/symmetrization.hpp"

#include <algorithm>
#include <cmath>

#include "capq/capacity.hpp"
#include "capq/quadrature.hpp"
#include "capq/spline.hpp"

namespace capq {

IsoperimetricProfile::IsoperimetricProfile(RadialConformalMetric metric, double r_reference,
                                           bool foliation_asserted)
    : metric_(std::move(metric)), r_reference_(r_reference) {
  if (!(r_reference_ > 0.0)) {
    throw std::invalid_argument("IsoperimetricProfile: reference radius must be positive");
  }
  // Detect the Schwarzschild family u = 1 + m/(2r) (closed forms apply).
  const double m_guess = 2.0 * r_reference_ * (metric_.u.value(r_reference_) - 1.0);
  bool is_schw = true;
  for (int i = 0; i <= 32; ++i) {
    const double r = r_reference_ * std::pow(100.0, i / 32.0);
    if (std::abs(metric_.u.value(r) - (1.0 + 0.5 * m_guess / r)) > 1e-12 * (1.0 + std::abs(m_guess))) {
      is_schw = false;
      break;
    }
  }
  if (is_schw) {
    schwarzschild_mass_ = m_guess;
  } else if (!foliation_asserted) {
    throw std::invalid_argument(
        "IsoperimetricProfile: non-Schwarzschild profile requires asserting the "
        "isoperimetric-foliation hypothesis");
  }
  // Necessary condition: coordinate-sphere area monotone in enclosed volume,
  // i.e. the areal radius u^2 r increasing outside the reference sphere.
  double prev = metric_.areal_radius(r_reference_);
  for (int i = 1; i <= 128; ++i) {
    const double r = r_reference_ * std::pow(1e3, i / 128.0);
    const double h = metric_.areal_radius(r);
    if (h < prev * (1.0 - 1e-12)) {
      throw std::invalid_argument(
          "IsoperimetricProfile: coordinate-sphere area is not monotone in volume; "
          "the foliation hypothesis fails");
    }
    prev = h;
  }
  // Attainable infimum of the signed volume (toward the inner domain edge).
  const double r_floor = std::max(metric_.r_b, 1e-6 * r_reference_);
  volume_floor_ = (r_floor < r_reference_) ? signed_volume(r_floor)
                                           : 0.0;
}

IsoperimetricProfile IsoperimetricProfile::schwarzschild(double mass) {
  if (!(mass > 0.0)) {
    throw std::invalid_argument("IsoperimetricProfile: Schwarzschild profile needs m > 0");
  }
  auto metric = RadialConformalMetric::schwarzschild(SchwarzschildSpec(mass, 1e-3 * mass));
  return IsoperimetricProfile(std::move(metric), 0.5 * mass);
}

double IsoperimetricProfile::signed_volume(double r0) const {
  if (!(r0 > 0.0)) throw std::invalid_argument("signed_volume: r0 must be positive");
  if (std::abs(r0 - r_reference_) < 1e-15 * r_reference_) return 0.0;
  return 4.0 * kPi *
         quad::integrate(
             [&](double s) {
               const double u = metric_.u.value(s);
               return std::pow(u, 6) * s * s;
             },
             r_reference_, r0, 1e-10);
}

double IsoperimetricProfile::radius_for_volume(double V) const {
  if (volume_floor_ != 0.0 && V < volume_floor_) {
    throw std::domain_error("radius_for_volume: volume below the attainable infimum");
  }
  double lo = r_reference_, hi = r_reference_;
  if (V >= 0.0) {
    while (signed_volume(hi) < V) {
      hi *= 2.0;
      if (hi > 1e9 * r_reference_) throw std::runtime_error("radius_for_volume: bracket overflow");
    }
  } else {
    const double r_floor = std::max(metric_.r_b, 1e-9 * r_reference_);
    lo = r_floor;
    if (signed_volume(lo) > V) {
      throw std::domain_error("radius_for_volume: volume below the attainable infimum");
    }
  }
  auto fn = [&](double r) { return signed_volume(r) - V; };
  return quad::bisect(fn, lo, hi, 1e-12);
}

double IsoperimetricProfile::area_for_volume(double V) const {
  const double r = radius_for_volume(V);
  const double h = metric_.areal_radius(r);
  return 4.0 * kPi * h * h;
}

double IsoperimetricProfile::capacity_for_volume(double V) const {
  const double r = radius_for_volume(V);
  if (schwarzschild_mass_) {
    return r + 0.5 * *schwarzschild_mass_;
  }
  return capacity_radial(to_warped(metric_), r).capacity;
}

double signed_volume_schwarzschild(double m, double r0) {
  if (!(m > 0.0) || !(r0 > 0.0)) {
    throw std::invalid_argument("signed_volume_schwarzschild: need m > 0 and r0 > 0");
  }
  auto prof = IsoperimetricProfile::schwarzschild(m);
  return prof.signed_volume(r0);
}

CoordinateSphere symmetric_counterpart(const IsoperimetricProfile& profile, double V) {
  return CoordinateSphere(profile.radius_for_volume(V));
}

SymmetrizationResult rearranged_energy(const CapacitySolution& sol, const LevelSetData& levels,
                                       const IsoperimetricProfile& profile,
                                       double vprime_check_tol) {
  const std::size_t n = levels.thresholds.size();
  if (n < 32) {
    throw std::invalid_argument("rearranged_energy: need >= 32 regular thresholds");
  }

  // V(t) decreases in t (level sets shrink toward the boundary); the chain
  // uses the positive coarea density -dV/dt = oint dsigma/|grad phi|.
  std::vector<double> t(levels.thresholds), volume(levels.volume);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!(volume[k + 1] < volume[k])) {
      throw std::runtime_error(
          "rearranged_energy: volumes are not monotone across thresholds "
          "(critical-value contamination)");
    }
  }
  MonotoneSpline v_of_t(t, volume);

  // Integrands at each threshold.
  std::vector<double> f_star(n), f_orig(n);
  double worst_mismatch = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vp_spline = -v_of_t.deriv(t[k]);
    const double vp_coarea = levels.coarea_vprime[k];
    worst_mismatch =
        std::max(worst_mismatch, std::abs(vp_spline - vp_coarea) / std::abs(vp_coarea));
    const double vp = vp_spline;
    const double area_star = profile.area_for_volume(levels.volume[k]);
    f_star[k] = area_star * area_star / vp;
    f_orig[k] = levels.area[k] * levels.area[k] / vp;
  }
  if (worst_mismatch > vprime_check_tol) {
    throw std::runtime_error("rearranged_energy: V'(t) cross-validation mismatch " +
                             std::to_string(worst_mismatch));
  }

  // Trapezoid over the sampled range plus end strips. Both integrands tend
  // to 4 pi C as t -> 0 (level sets become round); constant extension closes
  // the t -> 1 strip.
  const double four_pi_C = 4.0 * kPi * sol.capacity;
  auto integrate = [&](const std::vector<double>& f) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      acc += 0.5 * (f[k] + f[k + 1]) * (t[k + 1] - t[k]);
    }
    acc += 0.5 * (f.front() + four_pi_C) * (t.front() - 0.0);
    acc += f.back() * (1.0 - t.back());
    return acc;
  };

  SymmetrizationResult out;
  out.original_capacity = sol.capacity;
  out.energy_symmetrized = integrate(f_star);
  out.energy_rearranged = integrate(f_orig);
  out.energy_dirichlet = four_pi_C;
  out.symmetrized_capacity = profile.capacity_for_volume(levels.volume.front());
  out.gap = out.original_capacity - out.symmetrized_capacity;
  out.chain_tolerance = std::max(3.0 * sol.grid_error * 4.0 * kPi, 1e-12);
  out.chain_monotone = (out.energy_symmetrized <= out.energy_rearranged + out.chain_tolerance) &&
                       (out.energy_rearranged <= out.energy_dirichlet + out.chain_tolerance);
  return out;
}

CapacityComparisonReport szego_schwarzschild_compare(const CapacitySolution& sol,
                                                     const IsoperimetricProfile& profile) {
  if (!sol.meridian) {
    throw std::invalid_argument("szego_schwarzschild_compare: need a solved meridian field");
  }
  CapacityComparisonReport rep;
  rep.capacity = sol.capacity;
  rep.volume = enclosed_volume(profile.metric(), sol.meridian->boundary, profile.r_reference());
  rep.r_star = profile.radius_for_volume(rep.volume);
  rep.capacity_symmetrized = profile.capacity_for_volume(rep.volume);
  rep.gap = rep.capacity - rep.capacity_symmetrized;
  rep.tolerance = 5.0 * sol.grid_error;
  return rep;
}

double pfs_flat_bound(double volume) {
  if (!(volume > 0.0)) throw std::invalid_argument("pfs_flat_bound: volume must be positive");
  return std::cbrt(3.0 * volume / (4.0 * kPi));
}

}  // namespace capq
