#include "capq/revolution.hpp"

#include <algorithm>
#include <cmath>

#include "capq/quadrature.hpp"

namespace capq {

namespace {

// 5-point Gauss-Legendre nodes/weights on [0, 1].
constexpr double kGLx[5] = {0.046910077030668, 0.230765344947158, 0.5,
                            0.769234655052841, 0.953089922969332};
constexpr double kGLw[5] = {0.118463442528095, 0.239314335249683, 0.284444444444444,
                            0.239314335249683, 0.118463442528095};

template <typename F>
double panel_integrate(F&& f, double a, double b, int n_panels) {
  const double h = (b - a) / n_panels;
  double acc = 0.0;
  for (int p = 0; p < n_panels; ++p) {
    const double lo = a + p * h;
    for (int q = 0; q < 5; ++q) {
      acc += kGLw[q] * f(lo + kGLx[q] * h);
    }
  }
  return acc * h;
}

double spheroid_D(double a, double c, double v) {
  const double cv = std::cos(v), sv = std::sin(v);
  return std::sqrt(a * a * cv * cv + c * c * sv * sv);
}

}  // namespace

RevolutionSurfaceMetric RevolutionSurfaceMetric::round(double r_A) {
  if (!(r_A > 0.0)) throw std::invalid_argument("round: radius must be positive");
  RevolutionSurfaceMetric m;
  m.kind_ = Kind::Round;
  m.round_radius_ = r_A;
  m.L_ = kPi * r_A;
  return m;
}

RevolutionSurfaceMetric RevolutionSurfaceMetric::spheroid(double a, double c) {
  if (!(a > 0.0) || !(c > 0.0)) throw std::invalid_argument("spheroid: axes must be positive");
  RevolutionSurfaceMetric m;
  m.kind_ = Kind::Spheroid;
  m.sph_a_ = a;
  m.sph_c_ = c;
  // Cumulative arclength s(v) on a fine uniform v grid, then invert.
  const int n = 4096;
  std::vector<double> vs(n + 1), ss(n + 1);
  vs[0] = 0.0;
  ss[0] = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double v0 = kPi * (i - 1) / n;
    const double v1 = kPi * i / n;
    vs[i] = v1;
    ss[i] = ss[i - 1] + panel_integrate([&](double v) { return spheroid_D(a, c, v); }, v0, v1, 1);
  }
  m.L_ = ss[n];
  m.v_of_s_ = std::make_shared<CubicSpline>(ss, vs);
  return m;
}

RevolutionSurfaceMetric RevolutionSurfaceMetric::from_samples(std::vector<double> s,
                                                              std::vector<double> rho,
                                                              double end_tol) {
  if (s.size() < 8 || s.size() != rho.size()) {
    throw std::invalid_argument("from_samples: need >= 8 matching samples");
  }
  RevolutionSurfaceMetric m;
  m.kind_ = Kind::Sampled;
  m.L_ = s.back() - s.front();
  if (std::abs(s.front()) > 1e-12 * m.L_) {
    throw std::invalid_argument("from_samples: arclength must start at 0");
  }
  m.rho_spline_ = std::make_shared<CubicSpline>(std::move(s), std::move(rho));
  // Pole closure checks.
  const double L = m.L_;
  if (std::abs(m.rho(0.0)) > end_tol * L || std::abs(m.rho(L)) > end_tol * L) {
    throw std::invalid_argument("from_samples: profile must vanish at both poles");
  }
  const double d0 = m.drho(1e-4 * L), d1 = m.drho(L * (1.0 - 1e-4));
  if (std::abs(d0 - 1.0) > std::max(end_tol, 1e-2) || std::abs(d1 + 1.0) > std::max(end_tol, 1e-2)) {
    throw std::invalid_argument("from_samples: profile slopes at the poles must be +-1");
  }
  return m;
}

double RevolutionSurfaceMetric::rho(double s) const {
  switch (kind_) {
    case Kind::Round:
      return round_radius_ * std::sin(s / round_radius_);
    case Kind::Spheroid:
      return sph_a_ * std::sin((*v_of_s_)(s));
    case Kind::Sampled:
      return (*rho_spline_)(s);
  }
  return 0.0;
}

double RevolutionSurfaceMetric::drho(double s) const {
  switch (kind_) {
    case Kind::Round:
      return std::cos(s / round_radius_);
    case Kind::Spheroid: {
      const double v = (*v_of_s_)(s);
      return sph_a_ * std::cos(v) / spheroid_D(sph_a_, sph_c_, v);
    }
    case Kind::Sampled:
      return rho_spline_->deriv(s);
  }
  return 0.0;
}

double RevolutionSurfaceMetric::d2rho(double s) const {
  switch (kind_) {
    case Kind::Round:
      return -std::sin(s / round_radius_) / round_radius_;
    case Kind::Spheroid: {
      const double v = (*v_of_s_)(s);
      const double D = spheroid_D(sph_a_, sph_c_, v);
      return -sph_a_ * sph_c_ * sph_c_ * std::sin(v) / (D * D * D * D);
    }
    case Kind::Sampled:
      return rho_spline_->deriv2(s);
  }
  return 0.0;
}

double RevolutionSurfaceMetric::gauss_curvature(double s) const {
  switch (kind_) {
    case Kind::Round:
      return 1.0 / (round_radius_ * round_radius_);
    case Kind::Spheroid: {
      const double D = spheroid_D(sph_a_, sph_c_, (*v_of_s_)(s));
      return sph_c_ * sph_c_ / (D * D * D * D);
    }
    case Kind::Sampled: {
      // -rho''/rho, with the pole value taken just inside.
      const double cut = 2e-3 * L_;
      const double sc = std::clamp(s, cut, L_ - cut);
      return -d2rho(sc) / rho(sc);
    }
  }
  return 0.0;
}

double RevolutionSurfaceMetric::min_gauss_curvature(int n_scan) const {
  double kmin = std::numeric_limits<double>::infinity();
  for (int i = 1; i < n_scan; ++i) {
    kmin = std::min(kmin, gauss_curvature(L_ * i / n_scan));
  }
  return kmin;
}

double RevolutionSurfaceMetric::integral_gauss_curvature(int n_panels) const {
  return 2.0 * kPi *
         panel_integrate([this](double s) { return gauss_curvature(s) * rho(s); }, 0.0, L_,
                         n_panels);
}

double EmbeddedRevolutionSurface::dz(double s) const {
  const double dp = metric_.drho(s);
  return std::sqrt(std::max(0.0, 1.0 - dp * dp));
}

double EmbeddedRevolutionSurface::z(double s) const { return (*z_spline_)(s); }

EmbeddedRevolutionSurface embed_revolution(const RevolutionSurfaceMetric& m) {
  const double L = m.length();
  const int n_scan = 8192;
  for (int i = 0; i <= n_scan; ++i) {
    const double dp = m.drho(L * i / n_scan);
    if (std::abs(dp) > 1.0 + 1e-9) {
      throw std::domain_error(
          "embed_revolution: |rho'| = " + std::to_string(std::abs(dp)) +
          " > 1; metric is not embeddable as a surface of revolution");
    }
  }
  EmbeddedRevolutionSurface e(m);
  const int n = 8192;
  std::vector<double> ss(n + 1), zz(n + 1);
  ss[0] = 0.0;
  zz[0] = 0.0;
  auto integrand = [&](double s) { return e.dz(s); };
  for (int i = 1; i <= n; ++i) {
    ss[i] = L * i / n;
    zz[i] = zz[i - 1] + panel_integrate(integrand, ss[i - 1], ss[i], 1);
  }
  e.z_spline_ = std::make_shared<CubicSpline>(ss, zz);
  return e;
}

RevolutionSurfaceMetric induced_revolution_metric(const EmbeddedRevolutionSurface& e,
                                                  int n_samples) {
  // Arclength of the embedded meridian (rho, z); equals s up to quadrature.
  const double L = e.length();
  std::vector<double> sig(n_samples + 1), rho(n_samples + 1);
  sig[0] = 0.0;
  rho[0] = e.rho(0.0);
  const auto& m = e.source();
  auto speed = [&](double s) {
    const double dp = m.drho(s);
    const double dzv = e.dz(s);
    return std::sqrt(dp * dp + dzv * dzv);
  };
  for (int i = 1; i <= n_samples; ++i) {
    const double s0 = L * (i - 1) / n_samples;
    const double s1 = L * i / n_samples;
    sig[i] = sig[i - 1] + panel_integrate(speed, s0, s1, 1);
    rho[i] = e.rho(s1);
  }
  return RevolutionSurfaceMetric::from_samples(std::move(sig), std::move(rho));
}

double total_euclidean_mean_curvature(const EmbeddedRevolutionSurface& e, int n_panels) {
  const auto& m = e.source();
  auto integrand = [&](double s) {
    const double dp = m.drho(s);
    const double dzv = e.dz(s);
    const double omega = std::atan2(dzv, dp);  // turning angle in [0, pi]
    return dzv - omega * dp;
  };
  return 2.0 * kPi * panel_integrate(integrand, 0.0, e.length(), n_panels);
}

double lambda_invariant(const RevolutionSurfaceMetric& m) {
  const double kmin = m.min_gauss_curvature();
  if (!(kmin > 0.0)) {
    throw LambdaUnavailable("lambda_invariant: Gauss curvature is not strictly positive "
                            "(min K = " + std::to_string(kmin) + "); Lambda unavailable");
  }
  return total_euclidean_mean_curvature(embed_revolution(m)) / (8.0 * kPi);
}

double hawking_mass(double area, double total_H_sq) {
  if (!(area > 0.0)) throw std::invalid_argument("hawking_mass: area must be positive");
  return std::sqrt(area / (16.0 * kPi)) * (1.0 - total_H_sq / (16.0 * kPi));
}

double brown_york_mass(const RevolutionSurfaceMetric& m, double total_H_g) {
  const double total_H0 = total_euclidean_mean_curvature(embed_revolution(m));
  return (total_H0 - total_H_g) / (8.0 * kPi);
}

// --- Meridian curves -------------------------------------------------------

MeridianCurve MeridianCurve::ellipsoid(double a, double c) {
  if (!(a > 0.0) || !(c > 0.0)) throw std::invalid_argument("ellipsoid: axes must be positive");
  return MeridianCurve{[a, c](double theta) {
    const double st = std::sin(theta), ct = std::cos(theta);
    return 1.0 / std::sqrt(st * st / (a * a) + ct * ct / (c * c));
  }};
}

double MeridianCurve::dr(double theta) const {
  const double h = 1e-4;
  auto f = [&](double t) { return r_of_theta(std::clamp(t, 0.0, kPi)); };
  // Central difference with one Richardson step; poles use the symmetry
  // r(-t) = r(t), r(pi + t) = r(pi - t) of smooth axisymmetric curves.
  auto central = [&](double hh) {
    double tp = theta + hh, tm = theta - hh;
    double sp = 1.0, sm = 1.0;
    if (tm < 0.0) { tm = -tm; sm = 1.0; }
    if (tp > kPi) { tp = 2.0 * kPi - tp; sp = 1.0; }
    (void)sp; (void)sm;
    return (f(tp) - f(tm)) / (2.0 * hh);
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

double MeridianCurve::d2r(double theta) const {
  const double h = 1e-3;
  auto f = [&](double t) {
    double tt = t;
    if (tt < 0.0) tt = -tt;
    if (tt > kPi) tt = 2.0 * kPi - tt;
    return r_of_theta(tt);
  };
  auto central = [&](double hh) {
    return (f(theta + hh) - 2.0 * f(theta) + f(theta - hh)) / (hh * hh);
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

RevolutionSurfaceMetric induced_metric(const RadialConformalMetric& metric,
                                       const MeridianCurve& curve, int n_samples) {
  // Round detection: constant coordinate radius gives the exact round metric.
  double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 64; ++i) {
    const double r = curve(kPi * i / 64.0);
    rmax = std::max(rmax, r);
    rmin = std::min(rmin, r);
  }
  if (rmax - rmin <= 1e-13 * rmax) {
    return RevolutionSurfaceMetric::round(metric.areal_radius(curve(0.5 * kPi)));
  }

  // Metric arclength of the meridian: ds = u^2 sqrt(r_theta^2 + r^2) dtheta.
  auto speed = [&](double theta) {
    const double r = curve(theta);
    const double rt = curve.dr(theta);
    const double uu = metric.u.value(r);
    return uu * uu * std::sqrt(rt * rt + r * r);
  };
  std::vector<double> s(n_samples + 1), rho(n_samples + 1);
  s[0] = 0.0;
  rho[0] = 0.0;
  for (int i = 1; i <= n_samples; ++i) {
    const double t0 = kPi * (i - 1) / n_samples;
    const double t1 = kPi * i / n_samples;
    s[i] = s[i - 1] + panel_integrate(speed, t0, t1, 1);
    const double r = curve(t1);
    const double uu = metric.u.value(r);
    rho[i] = uu * uu * r * std::sin(t1);
  }
  rho[n_samples] = 0.0;
  return RevolutionSurfaceMetric::from_samples(std::move(s), std::move(rho));
}

double flat_mean_curvature(const MeridianCurve& curve, double theta) {
  const double r = curve(theta);
  const double rt = curve.dr(theta);
  const double rtt = curve.d2r(theta);
  const double st = std::sin(theta), ct = std::cos(theta);
  // Meridian point (R, Z) = (r sin, r cos); derivatives w.r.t. theta.
  const double Rp = rt * st + r * ct;
  const double Zp = rt * ct - r * st;
  const double Rpp = rtt * st + 2.0 * rt * ct - r * st;
  const double Zpp = rtt * ct - 2.0 * rt * st - r * ct;
  const double v = std::sqrt(Rp * Rp + Zp * Zp);
  const double kappa_m = (Rpp * Zp - Rp * Zpp) / (v * v * v);
  const double Rcyl = r * st;
  if (Rcyl <= 1e-14 * r) {
    // Pole: both principal curvatures agree; use the meridian one.
    return 2.0 * kappa_m;
  }
  const double kappa_p = -Zp / (v * Rcyl);
  return kappa_m + kappa_p;
}

double ambient_mean_curvature(const RadialConformalMetric& metric,
                              const MeridianCurve& curve, double theta) {
  const double r = curve(theta);
  const double rt = curve.dr(theta);
  const double st = std::sin(theta), ct = std::cos(theta);
  const double Rp = rt * st + r * ct;
  const double Zp = rt * ct - r * st;
  const double v = std::sqrt(Rp * Rp + Zp * Zp);
  // Outward flat normal (-Zp, Rp)/v; radial direction (st, ct).
  const double n_dot_rhat = (-Zp * st + Rp * ct) / v;
  const double u = metric.u.value(r);
  const double du = metric.u.deriv(r);
  const double H0 = flat_mean_curvature(curve, theta);
  return (H0 + 4.0 * (du / u) * n_dot_rhat) / (u * u);
}

double surface_area(const RadialConformalMetric& metric, const MeridianCurve& curve,
                    int n_panels) {
  auto integrand = [&](double theta) {
    const double r = curve(theta);
    const double rt = curve.dr(theta);
    const double uu = metric.u.value(r);
    return uu * uu * uu * uu * r * std::sin(theta) * std::sqrt(rt * rt + r * r);
  };
  return 2.0 * kPi * panel_integrate(integrand, 0.0, kPi, n_panels);
}

double enclosed_volume(const RadialConformalMetric& metric, const MeridianCurve& curve,
                       double r_inner, int n_panels) {
  // 2 pi int sin(theta) [int_{r_inner}^{r(theta)} u^6 s^2 ds] dtheta, signed.
  auto radial_part = [&](double r_to) {
    if (std::abs(r_to - r_inner) < 1e-15 * std::max(1.0, r_inner)) return 0.0;
    return quad::integrate(
        [&](double s) {
          const double uu = metric.u.value(s);
          return std::pow(uu, 6) * s * s;
        },
        r_inner, r_to, 1e-11);
  };
  auto integrand = [&](double theta) { return std::sin(theta) * radial_part(curve(theta)); };
  return 2.0 * kPi * panel_integrate(integrand, 0.0, kPi, n_panels);
}

QuasiLocalReport quasilocal_report_sphere(const RadialConformalMetric& metric, double r0,
                                          NormalConvention normal) {
  QuasiLocalReport rep;
  rep.normal = normal;
  const double rA = metric.areal_radius(r0);
  rep.area = 4.0 * kPi * rA * rA;
  rep.area_radius = rA;
  double H = mean_curvature_sphere(metric, r0);
  if (normal == NormalConvention::CompactSide) H = -H;
  rep.total_H_g = H * rep.area;
  rep.total_H_sq_g = H * H * rep.area;
  rep.total_H_g0 = 8.0 * kPi * rA;  // round sphere: (2/rA) * 4 pi rA^2
  rep.min_gauss = 1.0 / (rA * rA);
  rep.hawking = hawking_mass(rep.area, rep.total_H_sq_g);
  rep.lambda = rA;
  rep.brown_york = (*rep.total_H_g0 - rep.total_H_g) / (8.0 * kPi);
  return rep;
}

QuasiLocalReport quasilocal_report(const RadialConformalMetric& metric,
                                   const MeridianCurve& curve, NormalConvention normal,
                                   int n_samples) {
  QuasiLocalReport rep;
  rep.normal = normal;
  const double sign = (normal == NormalConvention::CompactSide) ? -1.0 : 1.0;
  rep.area = surface_area(metric, curve, n_samples);
  rep.area_radius = std::sqrt(rep.area / (4.0 * kPi));

  auto darea = [&](double theta) {
    const double r = curve(theta);
    const double rt = curve.dr(theta);
    const double uu = metric.u.value(r);
    return uu * uu * uu * uu * r * std::sin(theta) * std::sqrt(rt * rt + r * r);
  };
  rep.total_H_g = 2.0 * kPi *
                  panel_integrate(
                      [&](double th) { return sign * ambient_mean_curvature(metric, curve, th) * darea(th); },
                      0.0, kPi, n_samples);
  rep.total_H_sq_g = 2.0 * kPi *
                     panel_integrate(
                         [&](double th) {
                           const double H = ambient_mean_curvature(metric, curve, th);
                           return H * H * darea(th);
                         },
                         0.0, kPi, n_samples);
  rep.hawking = hawking_mass(rep.area, rep.total_H_sq_g);

  const RevolutionSurfaceMetric induced = induced_metric(metric, curve);
  rep.min_gauss = induced.min_gauss_curvature();
  const double max_dp = [&] {
    double m = 0.0;
    for (int i = 0; i <= 2048; ++i) {
      m = std::max(m, std::abs(induced.drho(induced.length() * i / 2048.0)));
    }
    return m;
  }();
  if (max_dp <= 1.0 + 1e-9) {
    rep.total_H_g0 = total_euclidean_mean_curvature(embed_revolution(induced));
    rep.brown_york = (*rep.total_H_g0 - rep.total_H_g) / (8.0 * kPi);
    if (rep.min_gauss > 0.0) {
      rep.lambda = *rep.total_H_g0 / (8.0 * kPi);
    }
  }
  return rep;
}

}  // namespace capq
