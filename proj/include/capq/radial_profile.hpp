#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "capq/spline.hpp"

namespace capq {

/// A radial profile u(r) on [r_min, infinity-ish), either a closed-form
/// callable (with derivatives obtained by Richardson-extrapolated central
/// differences in log r unless supplied) or monotone-grid samples resampled
/// onto a log-uniform grid with cubic interpolation. Node derivatives of
/// sampled profiles use centered 4th-order stencils in log r (one-sided at
/// the ends).
class RadialProfile {
 public:
  using Fn = std::function<double(double)>;

  static RadialProfile analytic(Fn u, double r_min, Fn du = nullptr,
                                Fn d2u = nullptr) {
    RadialProfile p;
    p.r_min_ = r_min;
    p.u_ = std::move(u);
    p.du_ = std::move(du);
    p.d2u_ = std::move(d2u);
    return p;
  }

  /// Samples (r_i, u_i) with strictly increasing r_i > 0; resampled onto a
  /// log-uniform grid of n_grid points spanning [r.front(), r.back()].
  static RadialProfile sampled(const std::vector<double>& r,
                               const std::vector<double>& u,
                               std::size_t n_grid = 0) {
    if (r.size() < 4 || r.size() != u.size()) {
      throw std::invalid_argument("RadialProfile: need >= 4 (r, u) samples");
    }
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      if (!(r[i] > 0.0) || !(r[i] < r[i + 1])) {
        throw std::invalid_argument("RadialProfile: r must be positive and strictly increasing");
      }
    }
    RadialProfile p;
    p.r_min_ = r.front();
    p.r_max_ = r.back();

    std::vector<double> x(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) x[i] = std::log(r[i]);
    CubicSpline raw(x, u);

    const std::size_t n = (n_grid > 0) ? n_grid : std::max<std::size_t>(r.size(), 256);
    const double x0 = x.front(), x1 = x.back();
    const double h = (x1 - x0) / static_cast<double>(n - 1);
    std::vector<double> xs(n), us(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = x0 + h * static_cast<double>(i);
      us[i] = raw(xs[i]);
    }

    // 4th-order first and second log-derivatives at the nodes.
    auto idx = [&](std::ptrdiff_t i) {
      return us[static_cast<std::size_t>(i)];
    };
    std::vector<double> ux(n), uxx(n);
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const std::ptrdiff_t nmax = static_cast<std::ptrdiff_t>(n) - 1;
      std::ptrdiff_t c = std::min(std::max<std::ptrdiff_t>(i, 2), nmax - 2);
      const double s = static_cast<double>(i - c);  // offset of i from stencil center
      // 5-point stencil centered at c, evaluated at offset s via the Lagrange
      // polynomial's derivatives; offsets -2..2.
      double d1 = 0.0, d2 = 0.0;
      for (int k = -2; k <= 2; ++k) {
        double w1 = 0.0, w2 = 0.0;
        lagrange_weights(k, s, w1, w2);
        d1 += w1 * idx(c + k);
        d2 += w2 * idx(c + k);
      }
      ux[i] = d1 / h;
      uxx[i] = d2 / (h * h);
    }
    p.grid_u_ = std::make_shared<CubicSpline>(xs, us);
    p.grid_ux_ = std::make_shared<CubicSpline>(xs, ux);
    p.grid_uxx_ = std::make_shared<CubicSpline>(xs, uxx);
    return p;
  }

  bool is_sampled() const { return grid_u_ != nullptr; }
  double r_min() const { return r_min_; }
  /// Outermost sampled radius (infinity for analytic profiles).
  double r_max() const { return r_max_; }

  double operator()(double r) const { return value(r); }

  double value(double r) const {
    check_domain(r);
    if (grid_u_) return (*grid_u_)(std::log(r));
    return u_(r);
  }

  double deriv(double r) const {
    check_domain(r);
    if (grid_u_) return (*grid_ux_)(std::log(r)) / r;
    if (du_) return du_(r);
    return richardson_log_deriv(r, 1);
  }

  double deriv2(double r) const {
    check_domain(r);
    if (grid_u_) {
      const double x = std::log(r);
      const double ux = (*grid_ux_)(x);
      const double uxx = (*grid_uxx_)(x);
      return (uxx - ux) / (r * r);
    }
    if (d2u_) return d2u_(r);
    return richardson_log_deriv(r, 2);
  }

 private:
  RadialProfile() = default;

  void check_domain(double r) const {
    if (!(r > 0.0) || r < r_min_ * (1.0 - 1e-12)) {
      throw std::domain_error("RadialProfile: r = " + std::to_string(r) +
                              " below inner domain radius " + std::to_string(r_min_));
    }
  }

  // Derivative weights of the degree-4 Lagrange polynomial through offsets
  // -2..2, evaluated at offset s (s = 0 gives the classic centered stencils).
  static void lagrange_weights(int k, double s, double& w1, double& w2) {
    // Nodes t_j = j for j in {-2,...,2}; basis L_k(t); w1 = L_k'(s), w2 = L_k''(s).
    constexpr int nodes[5] = {-2, -1, 0, 1, 2};
    double denom = 1.0;
    for (int j : nodes) {
      if (j != k) denom *= static_cast<double>(k - j);
    }
    // L_k(t) = prod_{j != k} (t - j) / denom; differentiate the quartic.
    // Expand prod as polynomial coefficients.
    double coef[5] = {1.0, 0.0, 0.0, 0.0, 0.0};  // coef[d] * t^d, degree grows
    int deg = 0;
    for (int j : nodes) {
      if (j == k) continue;
      for (int d = deg + 1; d >= 1; --d) coef[d] = coef[d - 1] - j * coef[d];
      coef[0] *= -static_cast<double>(j);
      ++deg;
    }
    double p1 = 0.0, p2 = 0.0, t = s;
    p1 = coef[1] + 2 * coef[2] * t + 3 * coef[3] * t * t + 4 * coef[4] * t * t * t;
    p2 = 2 * coef[2] + 6 * coef[3] * t + 12 * coef[4] * t * t;
    w1 = p1 / denom;
    w2 = p2 / denom;
  }

  double richardson_log_deriv(double r, int order) const {
    // Central differences in x = log r with one Richardson step.
    const double x = std::log(r);
    auto f = [&](double xx) { return u_(std::exp(xx)); };
    const double h = 1e-3;
    auto d = [&](double hh) {
      if (order == 1) return (f(x + hh) - f(x - hh)) / (2.0 * hh);
      return (f(x + hh) - 2.0 * f(x) + f(x - hh)) / (hh * hh);
    };
    const double d1 = d(h), d2 = d(0.5 * h);
    const double dx = (4.0 * d2 - d1) / 3.0;
    if (order == 1) return dx / r;
    const double ux = richardson_log_deriv(r, 1) * r;
    return (dx - ux) / (r * r);
  }

  double r_min_ = 0.0;
  double r_max_ = std::numeric_limits<double>::infinity();
  Fn u_, du_, d2u_;
  std::shared_ptr<CubicSpline> grid_u_, grid_ux_, grid_uxx_;
};

/// Two-column CSV (r, u) I/O with strictly increasing r; the writer emits the
/// same format it reads.
RadialProfile load_profile_csv(const std::string& path);
void save_profile_csv(const std::string& path, const std::vector<double>& r,
                      const std::vector<double>& u);

}  // namespace capq
