#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace capq {

/// Natural cubic spline through (x_i, y_i), x strictly increasing.
/// Evaluation outside [x_front, x_back] extrapolates with the end cubics.
class CubicSpline {
 public:
  CubicSpline() = default;

  CubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) {
      throw std::invalid_argument("CubicSpline: need >= 3 matching samples");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!(x_[i] < x_[i + 1])) {
        throw std::invalid_argument("CubicSpline: abscissae must increase");
      }
    }
    // Second derivatives m_i from the tridiagonal system (natural BCs),
    // solved by the Thomas algorithm.
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 1.0), rhs(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      diag[i] = 2.0 * (h0 + h1);
      upper[i] = h1;
      rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1];
      const double lower = (i == 1) ? 0.0 : h0;
      const double denom = diag[i] - lower * c[i - 1];
      c[i] = upper[i] / denom;
      d[i] = (rhs[i] - lower * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = d[i] - c[i] * m_[i + 1];
    }
  }

  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

  double operator()(double x) const { return eval(x); }

  double eval(double x) const {
    const auto [i, h, t] = locate(x);
    const double a = y_[i], b = y_[i + 1];
    const double ma = m_[i], mb = m_[i + 1];
    const double u = 1.0 - t;
    return u * a + t * b +
           (h * h / 6.0) * ((u * u * u - u) * ma + (t * t * t - t) * mb);
  }

  double deriv(double x) const {
    const auto [i, h, t] = locate(x);
    const double a = y_[i], b = y_[i + 1];
    const double ma = m_[i], mb = m_[i + 1];
    const double u = 1.0 - t;
    return (b - a) / h +
           (h / 6.0) * ((3.0 * t * t - 1.0) * mb - (3.0 * u * u - 1.0) * ma);
  }

  double deriv2(double x) const {
    const auto [i, h, t] = locate(x);
    (void)h;
    return (1.0 - t) * m_[i] + t * m_[i + 1];
  }

 private:
  std::tuple<std::size_t, double, double> locate(double x) const {
    std::size_t lo = 0, hi = x_.size() - 1;
    if (x <= x_.front()) {
      lo = 0;
    } else if (x >= x_.back()) {
      lo = x_.size() - 2;
    } else {
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (x_[mid] <= x ? lo : hi) = mid;
      }
    }
    const double h = x_[lo + 1] - x_[lo];
    return {lo, h, (x - x_[lo]) / h};
  }

  std::vector<double> x_, y_, m_;
};

/// Monotone (Fritsch--Carlson) piecewise-cubic Hermite interpolant.
/// Preserves monotonicity of the data; used where overshoot is unacceptable
/// (e.g. volume-vs-threshold curves that are differentiated afterwards).
class MonotoneSpline {
 public:
  MonotoneSpline() = default;

  MonotoneSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) {
      throw std::invalid_argument("MonotoneSpline: need >= 2 matching samples");
    }
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      if (!(h[i] > 0.0)) {
        throw std::invalid_argument("MonotoneSpline: abscissae must increase");
      }
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    d_[0] = delta[0];
    d_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        d_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    // Limit end slopes so the end intervals stay monotone.
    for (std::size_t i : {std::size_t{0}, n - 1}) {
      const double del = (i == 0) ? delta[0] : delta[n - 2];
      if (del == 0.0) {
        d_[i] = 0.0;
      } else if (d_[i] / del > 3.0) {
        d_[i] = 3.0 * del;
      } else if (d_[i] / del < 0.0) {
        d_[i] = 0.0;
      }
    }
  }

  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

  double operator()(double x) const {
    const auto [i, h, t] = locate(x);
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
  }

  double deriv(double x) const {
    const auto [i, h, t] = locate(x);
    const double g00 = 6.0 * t * (t - 1) / h;
    const double g10 = (1 - t) * (1 - 3 * t);
    const double g01 = -g00;
    const double g11 = t * (3 * t - 2);
    return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
  }

 private:
  std::tuple<std::size_t, double, double> locate(double x) const {
    std::size_t lo = 0, hi = x_.size() - 1;
    if (x <= x_.front()) {
      lo = 0;
    } else if (x >= x_.back()) {
      lo = x_.size() - 2;
    } else {
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (x_[mid] <= x ? lo : hi) = mid;
      }
    }
    const double h = x_[lo + 1] - x_[lo];
    return {lo, h, (x - x_[lo]) / h};
  }

  std::vector<double> x_, y_, d_;
};

}  // namespace capq
