#pragma once

#include <vector>

#include "capq/meridian_solver.hpp"

namespace capq {

/// Per-threshold data of the equipotential surfaces {phi = t}: meridian
/// contour, metric area, signed volume against the inner reference sphere,
/// flux, and the coarea integrand oint dsigma/|grad phi| (= V'(t)).
struct LevelSetData {
  std::vector<double> thresholds;            // in (0, 1), decreasing volume order
  std::vector<std::vector<double>> contour_r;  // r(theta_j) per threshold
  std::vector<double> theta;                 // shared theta nodes
  std::vector<double> area;                  // metric area |Sigma_t|
  std::vector<double> volume;                // signed V(t) w.r.t. r_reference
  std::vector<double> flux;                  // capacity estimate through Sigma_t
  std::vector<double> coarea_vprime;         // oint dsigma_g / |grad phi|_g
  std::vector<double> min_grad;              // min |grad phi|_g on the contour
  double r_reference = 0.0;                  // inner sphere of the volume integral
};

/// Extracts {phi = t} contours from a solved meridian field. Thresholds must
/// be regular values: the contour is rejected (throws) when |grad phi| drops
/// below grad_floor along it or when a theta column brackets the level more
/// than once.
LevelSetData extract_level_sets(const CapacitySolution& sol,
                                const std::vector<double>& thresholds,
                                double r_reference,
                                double grad_floor = 1e-8);

/// Chebyshev-spaced thresholds in (eps, 1-eps), avoiding the boundary layers.
std::vector<double> chebyshev_thresholds(int n, double eps = 0.02);

/// Meridian curve interpolating one extracted contour.
MeridianCurve contour_curve(const LevelSetData& data, std::size_t index);

}  // namespace capq
