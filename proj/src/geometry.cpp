#include "capq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "capq/quadrature.hpp"

namespace capq {

WarpedProductMetric to_warped(const RadialConformalMetric& metric) {
  const RadialProfile u = metric.u;  // value copy keeps the closure self-contained
  auto f = RadialProfile::analytic(
      [u](double r) {
        const double v = u.value(r);
        return v * v;
      },
      metric.r_b,
      [u](double r) { return 2.0 * u.value(r) * u.deriv(r); });
  auto h = RadialProfile::analytic(
      [u](double r) {
        const double v = u.value(r);
        return v * v * r;
      },
      metric.r_b,
      [u](double r) {
        const double v = u.value(r);
        return v * v + 2.0 * v * u.deriv(r) * r;
      });
  return WarpedProductMetric(std::move(f), std::move(h), metric.r_b);
}

double area_radius(const SchwarzschildSpec& spec, const CoordinateSphere& s) {
  if (s.r0 < spec.r_min * (1.0 - 1e-12)) {
    throw std::domain_error("area_radius: r0 below the domain's inner radius");
  }
  const double u = spec.u(s.r0);
  return u * u * s.r0;
}

double mean_curvature_sphere(const SchwarzschildSpec& spec, const CoordinateSphere& s) {
  if (s.r0 < spec.r_min * (1.0 - 1e-12)) {
    throw std::domain_error("mean_curvature_sphere: r0 below the domain's inner radius");
  }
  const double u = spec.u(s.r0);
  return 2.0 * (1.0 - 0.5 * spec.mass / s.r0) / (u * u * u * s.r0);
}

double euclidean_mean_curvature_round(double r_A) {
  if (!(r_A > 0.0)) {
    throw std::invalid_argument("euclidean_mean_curvature_round: r_A must be positive");
  }
  return 2.0 / r_A;
}

double area_radius(const RadialConformalMetric& metric, double r0) {
  return metric.areal_radius(r0);
}

double mean_curvature_sphere(const RadialConformalMetric& metric, double r0) {
  // H = 2 h' / (f h) with f = u^2, h = u^2 r.
  const double u = metric.u.value(r0);
  const double du = metric.u.deriv(r0);
  return 2.0 * (u + 2.0 * r0 * du) / (u * u * u * r0);
}

double scalar_curvature_radial(const RadialConformalMetric& metric, double r) {
  const double u = metric.u.value(r);
  const double lap = metric.u.deriv2(r) + 2.0 * metric.u.deriv(r) / r;
  return -8.0 * lap / std::pow(u, 5);
}

double adm_mass(const RadialConformalMetric& metric, double fit_tol) {
  // f(R) = R (u(R) - 1) = a + c/R + d/R^2 + O(R^-3); the combination
  // (8 f(4R) - 6 f(2R) + f(R)) / 3 returns a exactly for that model.
  double R = 64.0 * std::max(metric.r_b, 1.0);
  if (metric.u.is_sampled()) {
    R = metric.u.r_max() / 8.0;
    if (R < metric.r_b) {
      throw std::domain_error("adm_mass: sampled profile does not reach far enough out");
    }
  }
  auto fval = [&](double rr) { return rr * (metric.u.value(rr) - 1.0); };
  const double f1 = fval(R), f2 = fval(2.0 * R), f3 = fval(4.0 * R);
  const double a = (8.0 * f3 - 6.0 * f2 + f1) / 3.0;
  // Recover c, d and check the model at 8R.
  const double c_over_R = 10.0 * f2 - 8.0 * f3 - 2.0 * f1;
  const double d_over_R2 = f1 - a - c_over_R;
  const double predicted = a + 0.125 * c_over_R + d_over_R2 / 64.0;
  const double residual = std::abs(fval(8.0 * R) - predicted);
  if (residual > fit_tol * std::max(1.0, std::abs(a))) {
    throw std::runtime_error("adm_mass: asymptotic fit residual " + std::to_string(residual) +
                             " exceeds tolerance (insufficient decay or bad profile)");
  }
  return 2.0 * a;
}

std::optional<double> locate_horizon(const RadialConformalMetric& metric) {
  // (u^2 r)' = u (u + 2 r u'); u > 0, so scan sign changes of u + 2 r u'.
  auto slope = [&](double r) { return metric.u.value(r) + 2.0 * r * metric.u.deriv(r); };
  const double lo = metric.r_b;
  const double hi = metric.u.is_sampled() ? metric.u.r_max() : 1e4 * std::max(metric.r_b, 1.0);
  constexpr int n_scan = 512;
  std::optional<double> outermost;
  double r_prev = lo;
  double s_prev = slope(r_prev);
  for (int i = 1; i <= n_scan; ++i) {
    const double r = lo * std::pow(hi / lo, static_cast<double>(i) / n_scan);
    const double s = slope(r);
    if (s_prev == 0.0) {
      outermost = r_prev;
    } else if ((s_prev > 0.0) != (s > 0.0)) {
      outermost = quad::bisect(slope, r_prev, r, 1e-14);
    }
    r_prev = r;
    s_prev = s;
  }
  // A root sitting exactly on the inner domain edge (horizon boundary) can
  // evade the sign scan through roundoff; accept it when the slope there is
  // zero to within roundoff scale.
  if (!outermost && std::abs(slope(lo)) <= 1e-10 * std::max(1.0, std::abs(slope(hi)))) {
    outermost = lo;
  }
  return outermost;
}

RadialProfile kelvin_invert(const RadialConformalMetric& metric) {
  const RadialProfile u = metric.u;
  const double s_min = 1e-8;  // the puncture end; callers stay within (0, 1/r_b]
  return RadialProfile::analytic(
      [u](double s) { return u.value(1.0 / s) / s; }, s_min,
      [u](double s) {
        const double r = 1.0 / s;
        return (-u.deriv(r) * r * r * s - u.value(r)) / (s * s);
      });
}

RadialProfile load_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_profile_csv: cannot open " + path);
  std::vector<double> r, u;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double rv = 0.0, uv = 0.0;
    if (ss >> rv >> uv) {
      r.push_back(rv);
      u.push_back(uv);
    }
  }
  return RadialProfile::sampled(r, u);
}

void save_profile_csv(const std::string& path, const std::vector<double>& r,
                      const std::vector<double>& u) {
  if (r.size() != u.size()) {
    throw std::invalid_argument("save_profile_csv: mismatched column lengths");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_profile_csv: cannot open " + path);
  out.precision(17);
  for (std::size_t i = 0; i < r.size(); ++i) {
    out << r[i] << "," << u[i] << "\n";
  }
}

}  // namespace capq
