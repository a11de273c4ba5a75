#include "capq/meridian_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "capq/quadrature.hpp"

namespace capq {

namespace {

struct Mapping {
  const MeridianCurve* curve;
  double log_rt;

  double log_rb(double theta) const { return std::log((*curve)(theta)); }
  double r(double xi, double theta) const {
    return std::exp((1.0 - xi) * log_rb(theta) + xi * log_rt);
  }
  double r_xi(double xi, double theta) const {
    return r(xi, theta) * (log_rt - log_rb(theta));
  }
  double r_theta(double xi, double theta) const {
    const double rb = (*curve)(theta);
    return r(xi, theta) * (1.0 - xi) * (curve->dr(theta) / rb);
  }
};

// Coefficient matrix of the Dirichlet energy density in (xi, theta):
//   E = int [ K11 phi_xi^2 + 2 K12 phi_xi phi_theta + K22 phi_theta^2 ]
// with K11 = w (r_theta^2 + r^2)/r_xi, K12 = -w r_theta, K22 = w r_xi and
// w = 2 pi u(r)^2 sin(theta).
struct Coef {
  double k11, k12, k22;
};

Coef energy_coef(const Mapping& map, const RadialConformalMetric& metric, double xi,
                 double theta) {
  const double r = map.r(xi, theta);
  const double rx = map.r_xi(xi, theta);
  const double rt = map.r_theta(xi, theta);
  const double u = metric.u.value(r);
  const double w = 2.0 * kPi * u * u * std::sin(theta);
  return {w * (rt * rt + r * r) / rx, -w * rt, w * rx};
}

}  // namespace

AxisymDomainSpec::AxisymDomainSpec(MeridianCurve curve, RadialConformalMetric m,
                                   double r_trunc, int n_rad, int n_ang)
    : boundary(std::move(curve)),
      metric(std::move(m)),
      truncation_radius(r_trunc),
      n_radial(n_rad),
      n_angular(n_ang) {
  if (n_radial < 64 || n_angular < 64) {
    throw std::invalid_argument("AxisymDomainSpec: grid must be at least 64x64");
  }
  double rb_max = 0.0, rb_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 128; ++i) {
    const double r = boundary(kPi * i / 128.0);
    rb_max = std::max(rb_max, r);
    rb_min = std::min(rb_min, r);
  }
  if (!(rb_min > 0.0)) {
    throw std::invalid_argument("AxisymDomainSpec: boundary curve must be positive");
  }
  if (!(truncation_radius >= 10.0 * rb_max)) {
    throw std::invalid_argument(
        "AxisymDomainSpec: truncation radius must be >= 10x the outermost boundary radius");
  }
  // Smooth pole closure: the curve must be even in theta at both poles.
  const double eps = 1e-3;
  const double scale = rb_max;
  if (std::abs(boundary.dr(eps)) > 0.05 * scale || std::abs(boundary.dr(kPi - eps)) > 0.05 * scale) {
    throw std::invalid_argument(
        "AxisymDomainSpec: boundary curve must close smoothly at the poles "
        "(vanishing odd derivative)");
  }
}

double AxisymDomainSpec::max_boundary_radius() const {
  double rb_max = 0.0;
  for (int i = 0; i <= 128; ++i) rb_max = std::max(rb_max, boundary(kPi * i / 128.0));
  return rb_max;
}

double MeridianField::r_of(double xi_v, double theta_v) const {
  Mapping map{&boundary, std::log(truncation_radius)};
  return map.r(xi_v, theta_v);
}

double MeridianField::phi_at(double xi_v, double theta_v) const {
  const double fx = std::clamp(xi_v, 0.0, 1.0) * n_xi;
  const double ft = std::clamp(theta_v, 0.0, kPi) / kPi * n_theta;
  const int i = std::min(static_cast<int>(fx), n_xi - 1);
  const int j = std::min(static_cast<int>(ft), n_theta - 1);
  const double a = fx - i, b = ft - j;
  return (1 - a) * (1 - b) * node(i, j) + a * (1 - b) * node(i + 1, j) +
         (1 - a) * b * node(i, j + 1) + a * b * node(i + 1, j + 1);
}

void MeridianField::flat_gradient(double xi_v, double theta_v, double& dphi_dr,
                                  double& dphi_dtheta) const {
  const double dxi = 1.0 / n_xi;
  const double dth = kPi / n_theta;
  // Centered differences of the bilinear interpolant; step at half a cell.
  const double hx = 0.5 * dxi, ht = 0.5 * dth;
  const double xlo = std::max(0.0, xi_v - hx), xhi = std::min(1.0, xi_v + hx);
  const double tlo = std::max(0.0, theta_v - ht), thi = std::min(kPi, theta_v + ht);
  const double phi_xi = (phi_at(xhi, theta_v) - phi_at(xlo, theta_v)) / (xhi - xlo);
  const double phi_th = (phi_at(xi_v, thi) - phi_at(xi_v, tlo)) / (thi - tlo);
  Mapping map{&boundary, std::log(truncation_radius)};
  const double rx = map.r_xi(xi_v, theta_v);
  const double rt = map.r_theta(xi_v, theta_v);
  dphi_dr = phi_xi / rx;
  dphi_dtheta = phi_th - phi_xi * rt / rx;
}

std::pair<double, double> MeridianField::interior_range() const {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 1; i < n_xi; ++i) {
    for (int j = 0; j <= n_theta; ++j) {
      lo = std::min(lo, node(i, j));
      hi = std::max(hi, node(i, j));
    }
  }
  return {lo, hi};
}

CapacitySolution capacity_axisym_fd(const AxisymDomainSpec& domain) {
  const int nx = domain.n_radial, nt = domain.n_angular;
  const int n_nodes_t = nt + 1;
  const int n_unknown = nx * n_nodes_t;  // rows i = 1..nx
  Mapping map{&domain.boundary, std::log(domain.truncation_radius)};

  auto unknown_id = [&](int i, int j) { return (i - 1) * n_nodes_t + j; };

  const double dxi = 1.0 / nx;
  const double dth = kPi / nt;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n_unknown) * 9);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_unknown);

  // P1 assembly: each cell split along the (i,j)-(i+1,j+1) diagonal.
  auto add_triangle = [&](const std::array<std::pair<int, int>, 3>& verts) {
    double x[3], y[3];
    for (int a = 0; a < 3; ++a) {
      x[a] = verts[a].first * dxi;
      y[a] = verts[a].second * dth;
    }
    const double area2 = (x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]);
    const double cx = (x[0] + x[1] + x[2]) / 3.0;
    const double cy = (y[0] + y[1] + y[2]) / 3.0;
    const Coef K = energy_coef(map, domain.metric, cx, cy);
    double gx[3], gy[3];
    gx[0] = (y[1] - y[2]) / area2;
    gy[0] = (x[2] - x[1]) / area2;
    gx[1] = (y[2] - y[0]) / area2;
    gy[1] = (x[0] - x[2]) / area2;
    gx[2] = (y[0] - y[1]) / area2;
    gy[2] = (x[1] - x[0]) / area2;
    const double w = std::abs(area2) / 2.0;
    for (int a = 0; a < 3; ++a) {
      const auto [ia, ja] = verts[a];
      if (ia == 0) continue;  // Dirichlet row
      for (int b = 0; b < 3; ++b) {
        const auto [ib, jb] = verts[b];
        const double kab = w * (K.k11 * gx[a] * gx[b] + K.k12 * (gx[a] * gy[b] + gy[a] * gx[b]) +
                                K.k22 * gy[a] * gy[b]);
        if (ib == 0) {
          rhs[unknown_id(ia, ja)] -= kab;  // Dirichlet value phi = 1
        } else {
          trip.emplace_back(unknown_id(ia, ja), unknown_id(ib, jb), kab);
        }
      }
    }
  };

  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < nt; ++j) {
      add_triangle({{{i, j}, {i + 1, j}, {i + 1, j + 1}}});
      add_triangle({{{i, j}, {i + 1, j + 1}, {i, j + 1}}});
    }
  }

  // Robin closure at xi = 1. The monopole far field of the potential in a
  // radial metric is proportional to T(r) = int_r^inf f/h^2, so we impose
  // d(phi)/dr + kappa phi = 0 with kappa = -T'/T = (f/h^2)/T at the
  // truncation sphere (kappa = 1/r in flat space). Energy contribution:
  // oint u^2 kappa phi^2 dA = 2 pi u(Rt)^2 kappa Rt^2 int phi^2 sin dtheta.
  const double Rt = domain.truncation_radius;
  const double u_rt = domain.metric.u.value(Rt);
  const double robin_kappa = [&] {
    const double f_rt = u_rt * u_rt;
    const double h_rt = u_rt * u_rt * Rt;
    const double T_rt = quad::integrate_to_infinity(
        [&](double s) {
          const double us = domain.metric.u.value(s);
          return 1.0 / (us * us * s * s);
        },
        Rt, 1e-12);
    return (f_rt / (h_rt * h_rt)) / T_rt;
  }();
  for (int j = 0; j < nt; ++j) {
    const double tmid = (j + 0.5) * dth;
    const double c = 2.0 * kPi * u_rt * u_rt * robin_kappa * Rt * Rt * std::sin(tmid) * dth;
    const int a = unknown_id(nx, j), b = unknown_id(nx, j + 1);
    trip.emplace_back(a, a, c / 3.0);
    trip.emplace_back(b, b, c / 3.0);
    trip.emplace_back(a, b, c / 6.0);
    trip.emplace_back(b, a, c / 6.0);
  }

  Eigen::SparseMatrix<double> A(n_unknown, n_unknown);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double>>
      cg;
  cg.setTolerance(domain.cg_tol);
  cg.setMaxIterations(50000);
  cg.compute(A);
  if (cg.info() != Eigen::Success) {
    throw std::runtime_error("capacity_axisym_fd: preconditioner setup failed");
  }

  // Harmonic-flavored initial guess phi0 = (1/r - 1/Rt)/(1/rb - 1/Rt).
  Eigen::VectorXd x0(n_unknown);
  for (int i = 1; i <= nx; ++i) {
    for (int j = 0; j <= nt; ++j) {
      const double th = j * dth;
      const double r = map.r(i * dxi, th);
      const double rb = domain.boundary(th);
      x0[unknown_id(i, j)] = (1.0 / r - 0.5 / Rt) / (1.0 / rb - 0.5 / Rt);
    }
  }
  Eigen::VectorXd sol = cg.solveWithGuess(rhs, x0);
  if (cg.info() != Eigen::Success) {
    throw std::runtime_error("capacity_axisym_fd: conjugate gradients did not converge (" +
                             std::to_string(cg.iterations()) + " iterations, error " +
                             std::to_string(cg.error()) + ")");
  }

  auto field = std::make_shared<MeridianField>(domain.boundary, domain.metric);
  field->n_xi = nx;
  field->n_theta = nt;
  field->truncation_radius = Rt;
  field->cg_iterations = static_cast<int>(cg.iterations());
  field->xi.resize(nx + 1);
  for (int i = 0; i <= nx; ++i) field->xi[i] = i * dxi;
  field->theta.resize(nt + 1);
  for (int j = 0; j <= nt; ++j) field->theta[j] = j * dth;
  field->phi.assign(static_cast<std::size_t>(nx + 1) * n_nodes_t, 1.0);
  for (int i = 1; i <= nx; ++i) {
    for (int j = 0; j <= nt; ++j) {
      field->phi[static_cast<std::size_t>(i) * n_nodes_t + j] = sol[unknown_id(i, j)];
    }
  }

  // Flux extraction on xi midplanes: F = 2 pi int u^2 sin(theta)
  //   [ (r_theta^2 + r^2) phi_xi / r_xi - r_theta phi_theta ] dtheta.
  auto flux_at_layer = [&](int i) {
    const double xi_mid = (i + 0.5) * dxi;
    double acc = 0.0;
    for (int j = 0; j <= nt; ++j) {
      const double th = j * dth;
      const double phi_xi = (field->node(i + 1, j) - field->node(i, j)) / dxi;
      double phi_th;
      if (j == 0 || j == nt) {
        phi_th = 0.0;  // axisymmetric smoothness at the poles
      } else {
        phi_th = 0.25 *
                 ((field->node(i, j + 1) - field->node(i, j - 1)) +
                  (field->node(i + 1, j + 1) - field->node(i + 1, j - 1))) /
                 dth;
      }
      const double r = map.r(xi_mid, th);
      const double rx = map.r_xi(xi_mid, th);
      const double rt = map.r_theta(xi_mid, th);
      const double u = domain.metric.u.value(r);
      const double term = u * u * std::sin(th) * ((rt * rt + r * r) * phi_xi / rx - rt * phi_th);
      acc += (j == 0 || j == nt ? 0.5 : 1.0) * term;  // trapezoid in theta
    }
    return 2.0 * kPi * acc * dth;
  };

  CapacitySolution out;
  out.meridian = field;
  const double xi_extract[4] = {0.55, 0.65, 0.78, 0.90};
  for (double xe : xi_extract) {
    const int i = std::min(nx - 1, std::max(1, static_cast<int>(xe * nx)));
    const double c_est = -flux_at_layer(i) / (4.0 * kPi);
    out.flux_samples.push_back({map.r((i + 0.5) * dxi, 0.5 * kPi), c_est});
  }
  double c_mean = 0.0;
  for (const auto& fs : out.flux_samples) c_mean += fs.value;
  c_mean /= static_cast<double>(out.flux_samples.size());
  double spread = 0.0;
  for (const auto& fs : out.flux_samples) {
    spread = std::max(spread, std::abs(fs.value - c_mean) / std::abs(c_mean));
  }

  // Energy route: E = phi^T K phi over all elements plus the Robin term.
  double energy = 0.0;
  {
    auto phi_of = [&](int i, int j) { return field->node(i, j); };
    auto tri_energy = [&](const std::array<std::pair<int, int>, 3>& verts) {
      double x[3], y[3], p[3];
      for (int a = 0; a < 3; ++a) {
        x[a] = verts[a].first * dxi;
        y[a] = verts[a].second * dth;
        p[a] = phi_of(verts[a].first, verts[a].second);
      }
      const double area2 = (x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]);
      const Coef K = energy_coef(map, domain.metric, (x[0] + x[1] + x[2]) / 3.0,
                                 (y[0] + y[1] + y[2]) / 3.0);
      double gx = 0.0, gy = 0.0;
      gx = (p[0] * (y[1] - y[2]) + p[1] * (y[2] - y[0]) + p[2] * (y[0] - y[1])) / area2;
      gy = (p[0] * (x[2] - x[1]) + p[1] * (x[0] - x[2]) + p[2] * (x[1] - x[0])) / area2;
      energy += std::abs(area2) / 2.0 *
                (K.k11 * gx * gx + 2.0 * K.k12 * gx * gy + K.k22 * gy * gy);
    };
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < nt; ++j) {
        tri_energy({{{i, j}, {i + 1, j}, {i + 1, j + 1}}});
        tri_energy({{{i, j}, {i + 1, j + 1}, {i, j + 1}}});
      }
    }
    for (int j = 0; j < nt; ++j) {
      const double tmid = (j + 0.5) * dth;
      const double c = 2.0 * kPi * u_rt * u_rt * robin_kappa * Rt * Rt * std::sin(tmid) * dth;
      const double pa = phi_of(nx, j), pb = phi_of(nx, j + 1);
      energy += c * (pa * pa + pa * pb + pb * pb) / 3.0;
    }
  }
  const double c_energy = energy / (4.0 * kPi);

  field->capacity_flux = c_mean;
  field->capacity_energy = c_energy;
  field->flux_samples = out.flux_samples;
  field->flux_spread = spread;

  out.capacity = c_mean;
  out.flux_spread = spread;
  out.asymptotic_coefficient = asymptotic_fit_meridian(*field);
  // Error estimate: flux spread, disagreement of the two routes, and the
  // second-order discretization scale (the routes can share part of the bias).
  const double h_scale = 0.5 * std::abs(c_mean) * (dxi * dxi + dth * dth);
  out.grid_error =
      std::max({spread * std::abs(c_mean), 3.0 * std::abs(c_energy - c_mean), h_scale});
  field->grid_error = out.grid_error;

  // Under-resolution guard: the two routes must agree to a few grid units.
  const double grid_tol = 200.0 * c_mean * (1.0 / (double(nx) * nx) + 4.0 / (double(nt) * nt));
  if (spread * c_mean > 10.0 * grid_tol) {
    throw std::runtime_error("capacity_axisym_fd: flux spread " + std::to_string(spread) +
                             " signals an under-resolved grid");
  }
  return out;
}

BoundaryGradientData boundary_gradient_meridian(const MeridianField& field,
                                                const RadialConformalMetric& metric) {
  BoundaryGradientData out;
  Mapping map{&field.boundary, std::log(field.truncation_radius)};
  const int nt = field.n_theta;
  const double dxi = 1.0 / field.n_xi;
  bool hyp1 = true, hyp2 = true;
  for (int j = 0; j <= nt; ++j) {
    const double th = field.theta[j];
    // One-sided second-order derivative at the Dirichlet boundary; the
    // tangential derivative vanishes there (phi = 1 along the curve).
    const double phi_xi =
        (-3.0 * field.node(0, j) + 4.0 * field.node(1, j) - field.node(2, j)) / (2.0 * dxi);
    const double r = map.r(0.0, th);
    const double rx = map.r_xi(0.0, th);
    const double rt = map.r_theta(0.0, th);
    const double grad0 = std::abs(phi_xi) * std::sqrt((rt * rt + r * r) / (rx * rx * r * r));
    const double u = metric.u.value(r);
    const double grad_g = grad0 / (u * u);
    const double H = ambient_mean_curvature(metric, field.boundary, th);
    out.mu.push_back(std::cos(th));
    out.grad_phi_g.push_back(grad_g);
    out.mean_curvature_g.push_back(H);
    out.grad_log_u_g.push_back(grad_g);  // u_pot = 1/2 on the boundary
    hyp1 = hyp1 && (H < 4.0 * grad_g);
    hyp2 = hyp2 && (H > -4.0 * grad_g);
  }
  out.hypothesis_H_lt_4grad = hyp1;
  out.hypothesis_H_gt_m4gradlog = hyp2;
  return out;
}

double asymptotic_fit_meridian(const MeridianField& field) {
  // Fit r*phi = C + D/r over the outer grid layers (inside the Robin sphere),
  // averaging phi over theta per layer first.
  const int nx = field.n_xi, nt = field.n_theta;
  Mapping map{&field.boundary, std::log(field.truncation_radius)};
  std::vector<double> rs, fs;
  for (int i = static_cast<int>(0.70 * nx); i <= static_cast<int>(0.95 * nx); i += 2) {
    double acc_rphi = 0.0, acc_r = 0.0;
    int count = 0;
    for (int j = 0; j <= nt; ++j) {
      const double r = map.r(field.xi[i], field.theta[j]);
      acc_rphi += r * field.node(i, j);
      acc_r += r;
      ++count;
    }
    rs.push_back(acc_r / count);
    fs.push_back(acc_rphi / count);
  }
  return fit_inverse_radius_model(rs, fs);
}

double truncation_error_estimate(const AxisymDomainSpec& domain) {
  AxisymDomainSpec doubled(domain.boundary, domain.metric, 2.0 * domain.truncation_radius,
                           domain.n_radial, domain.n_angular);
  const double c1 = capacity_axisym_fd(domain).capacity;
  const double c2 = capacity_axisym_fd(doubled).capacity;
  return std::abs(c2 - c1);
}

std::uint64_t metric_hash(const RadialConformalMetric& metric) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  auto mix = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  const double hi = metric.u.is_sampled() ? metric.u.r_max() : 1e4 * metric.r_b;
  for (int i = 0; i <= 64; ++i) {
    const double r = metric.r_b * std::pow(hi / metric.r_b, i / 64.0);
    mix(r);
    mix(metric.u.value(r));
  }
  return h;
}

void save_meridian_binary(const MeridianField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_meridian_binary: cannot open " + path);
  const char magic[8] = {'C', 'A', 'P', 'Q', 'M', 'E', 'R', '1'};
  out.write(magic, 8);
  const std::int64_t dims[2] = {field.n_xi, field.n_theta};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  out.write(reinterpret_cast<const char*>(&field.truncation_radius), sizeof(double));
  const std::uint64_t mh = metric_hash(field.metric);
  out.write(reinterpret_cast<const char*>(&mh), sizeof(mh));
  auto write_vec = [&out](const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  };
  write_vec(field.theta);
  write_vec(field.xi);
  std::vector<double> rvals;
  rvals.reserve(field.phi.size());
  for (int i = 0; i <= field.n_xi; ++i) {
    for (int j = 0; j <= field.n_theta; ++j) {
      rvals.push_back(field.r_of(field.xi[i], field.theta[j]));
    }
  }
  write_vec(rvals);
  write_vec(field.phi);
}

MeridianSnapshot load_meridian_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_meridian_binary: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, "CAPQMER1", 8) != 0) {
    throw std::runtime_error("load_meridian_binary: bad magic in " + path);
  }
  MeridianSnapshot snap;
  std::int64_t dims[2];
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  snap.n_xi = dims[0];
  snap.n_theta = dims[1];
  in.read(reinterpret_cast<char*>(&snap.truncation_radius), sizeof(double));
  in.read(reinterpret_cast<char*>(&snap.metric_hash), sizeof(std::uint64_t));
  auto read_vec = [&in](std::vector<double>& v, std::size_t n) {
    v.resize(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  };
  const std::size_t nnodes =
      static_cast<std::size_t>(snap.n_xi + 1) * static_cast<std::size_t>(snap.n_theta + 1);
  read_vec(snap.theta, static_cast<std::size_t>(snap.n_theta + 1));
  read_vec(snap.xi, static_cast<std::size_t>(snap.n_xi + 1));
  read_vec(snap.r, nnodes);
  read_vec(snap.phi, nnodes);
  if (!in) throw std::runtime_error("load_meridian_binary: truncated file " + path);
  return snap;
}

void save_meridian_csv(const MeridianField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_meridian_csv: cannot open " + path);
  out.precision(17);
  out << "rho,mu,r,theta,phi\n";
  for (int i = 0; i <= field.n_xi; ++i) {
    for (int j = 0; j <= field.n_theta; ++j) {
      const double th = field.theta[j];
      const double r = field.r_of(field.xi[i], th);
      out << 1.0 / r << "," << std::cos(th) << "," << r << "," << th << ","
          << field.node(i, j) << "\n";
    }
  }
}

}  // namespace capq
