#include "capq/level_sets.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "capq/quadrature.hpp"
#include "capq/spline.hpp"

namespace capq {

std::vector<double> chebyshev_thresholds(int n, double eps) {
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) {
    const double x = std::cos(kPi * (k + 0.5) / n);  // in (-1, 1)
    t[k] = eps + (1.0 - 2.0 * eps) * 0.5 * (x + 1.0);
  }
  std::sort(t.begin(), t.end());
  return t;
}

LevelSetData extract_level_sets(const CapacitySolution& sol,
                                const std::vector<double>& thresholds,
                                double r_reference, double grad_floor) {
  if (!sol.meridian) {
    throw std::invalid_argument("extract_level_sets: need a solved meridian field");
  }
  const MeridianField& f = *sol.meridian;
  const auto& metric = f.metric;
  const int nx = f.n_xi, nt = f.n_theta;

  LevelSetData out;
  out.theta = f.theta;
  out.r_reference = r_reference;

  // Cached radial volume antiderivative W(r) = int_{r_ref}^r u^6 s^2 ds on a
  // log grid covering the field.
  const double r_lo = 0.5 * std::min(r_reference, f.r_of(0.0, 0.0));
  const double r_hi = f.truncation_radius;
  const int n_w = 2048;
  std::vector<double> wx(n_w + 1), wy(n_w + 1);
  {
    double acc = 0.0;
    double prev = r_lo;
    for (int i = 0; i <= n_w; ++i) {
      const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / n_w);
      if (i > 0) {
        acc += quad::integrate(
            [&](double s) {
              const double us = metric.u.value(s);
              return std::pow(us, 6) * s * s;
            },
            prev, r, 1e-12);
      }
      wx[i] = std::log(r);
      wy[i] = acc;
      prev = r;
    }
  }
  CubicSpline W(wx, wy);
  const double W_ref = W(std::log(r_reference));

  for (double t : thresholds) {
    if (!(t > 0.0) || !(t < 1.0)) {
      throw std::invalid_argument("extract_level_sets: thresholds must lie strictly in (0,1)");
    }
    std::vector<double> rc(nt + 1), xic(nt + 1);
    for (int j = 0; j <= nt; ++j) {
      // phi decreases in xi away from the boundary; find the unique bracket.
      int hits = 0;
      int i_hit = -1;
      for (int i = 0; i < nx; ++i) {
        const double a = f.node(i, j) - t, b = f.node(i + 1, j) - t;
        if ((a > 0.0 && b <= 0.0) || (a <= 0.0 && b > 0.0)) {
          ++hits;
          i_hit = i;
        }
      }
      if (hits != 1) {
        throw std::runtime_error(
            "extract_level_sets: threshold " + std::to_string(t) +
            " is not bracketed exactly once along a meridian column (near-critical "
            "or out-of-range level)");
      }
      const double a = f.node(i_hit, j), b = f.node(i_hit + 1, j);
      const double frac = (a - t) / (a - b);
      const double xi_star = f.xi[i_hit] + frac / nx;
      xic[j] = xi_star;
      rc[j] = f.r_of(xi_star, f.theta[j]);
    }

    // Geometry along the contour, splined over theta.
    std::vector<double> th(nt + 1);
    for (int j = 0; j <= nt; ++j) th[j] = f.theta[j];
    CubicSpline rho_spline(th, rc);

    double area = 0.0, vol = 0.0, flux = 0.0, vprime = 0.0;
    double mingrad = std::numeric_limits<double>::infinity();
    const int n_panels = 4 * nt;
    for (int p = 0; p < n_panels; ++p) {
      const double theta = kPi * (p + 0.5) / n_panels;
      const double r = rho_spline(theta);
      const double rt = rho_spline.deriv(theta);
      const double st = std::sin(theta);
      const double u = metric.u.value(r);
      const double dl0 = std::sqrt(rt * rt + r * r);
      const double u4 = u * u * u * u;

      double phi_r = 0.0, phi_th = 0.0;
      {
        // Invert the fitted mapping for xi at (r, theta) to sample gradients.
        const double lrb = std::log(f.boundary(theta));
        const double lrt = std::log(f.truncation_radius);
        const double xi_v = (std::log(r) - lrb) / (lrt - lrb);
        f.flat_gradient(std::clamp(xi_v, 0.0, 1.0), theta, phi_r, phi_th);
      }
      const double grad0 = std::sqrt(phi_r * phi_r + (phi_th / r) * (phi_th / r));
      const double grad_g = grad0 / (u * u);
      mingrad = std::min(mingrad, grad_g);

      const double w = kPi * (2.0 / n_panels);  // dtheta
      area += 2.0 * kPi * u4 * r * st * dl0 * w;
      vol += 2.0 * kPi * st * (W(std::log(r)) - W_ref) * w;
      // Flux of u^2 grad phi through the contour (outward):
      //   2 pi int u^2 sin(theta) [rho^2 phi_r - rho' phi_theta] dtheta.
      flux += 2.0 * kPi * u * u * st * (r * r * phi_r - rt * phi_th) * w;
      vprime += 2.0 * kPi * std::pow(u, 6) * r * st * dl0 / grad0 * w;
    }
    if (!(mingrad > grad_floor)) {
      throw std::runtime_error("extract_level_sets: threshold " + std::to_string(t) +
                               " sits at a near-critical value (|grad phi| ~ " +
                               std::to_string(mingrad) + ")");
    }
    out.thresholds.push_back(t);
    out.contour_r.push_back(rc);
    out.area.push_back(area);
    out.volume.push_back(vol);
    out.flux.push_back(-flux / (4.0 * kPi));
    out.coarea_vprime.push_back(vprime);
    out.min_grad.push_back(mingrad);
  }
  return out;
}

MeridianCurve contour_curve(const LevelSetData& data, std::size_t index) {
  if (index >= data.contour_r.size()) {
    throw std::out_of_range("contour_curve: no such contour");
  }
  auto spline = std::make_shared<CubicSpline>(data.theta, data.contour_r[index]);
  return MeridianCurve{[spline](double theta) { return (*spline)(theta); }};
}

}  // namespace capq
