#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>

#include "capq/meridian_solver.hpp"

using namespace capq;

namespace {

AxisymDomainSpec round_domain(double r_b, const RadialConformalMetric& metric, int nx, int nt,
                              double trunc_factor = 12.0) {
  return AxisymDomainSpec(MeridianCurve::sphere(r_b), metric, trunc_factor * r_b, nx, nt);
}

// Prolate spheroid capacity in flat space: sqrt(c^2-a^2)/arccosh(c/a).
double prolate_capacity(double a, double c) {
  const double k = std::sqrt(c * c - a * a);
  return k / std::acosh(c / a);
}

}  // namespace

TEST_CASE("flat round sphere capacity within 1% on 256x128, >=3x error drop on doubling") {
  auto flat = RadialConformalMetric::flat(1e-3);
  auto sol_c = capacity_axisym_fd(round_domain(3.0, flat, 128, 64));
  auto sol_m = capacity_axisym_fd(round_domain(3.0, flat, 256, 128));
  const double err_c = std::abs(sol_c.capacity - 3.0);
  const double err_m = std::abs(sol_m.capacity - 3.0);
  CHECK(err_m / 3.0 < 0.01);
  CHECK(err_c / err_m >= 3.0);
  CHECK(sol_m.flux_spread < 1e-3);
  // Reported grid error bounds the true error within a small factor.
  CHECK(err_m < 5.0 * sol_m.grid_error + 1e-12);
}

TEST_CASE("schwarzschild round boundary matches the radial route") {
  auto metric = RadialConformalMetric::schwarzschild(SchwarzschildSpec(2.0, 0.5));
  auto sol = capacity_axisym_fd(round_domain(2.0, metric, 192, 96));
  CHECK(sol.capacity == doctest::Approx(3.0).epsilon(5e-3));
  CHECK(std::abs(sol.capacity - 3.0) < 5.0 * sol.grid_error + 1e-12);
  // Energy and flux routes agree.
  CHECK(sol.meridian->capacity_energy == doctest::Approx(sol.capacity).epsilon(1e-2));
}

TEST_CASE("maximum principle on interior nodes") {
  auto flat = RadialConformalMetric::flat(1e-3);
  auto sol = capacity_axisym_fd(round_domain(1.0, flat, 96, 64));
  auto [lo, hi] = sol.meridian->interior_range();
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);

  auto metric = RadialConformalMetric::schwarzschild(SchwarzschildSpec(1.0, 0.25));
  auto curve = MeridianCurve::from_mu_profile([](double mu) { return 2.0 * (1.0 + 0.3 * mu * mu); });
  AxisymDomainSpec dom(curve, metric, 40.0, 96, 64);
  auto sol2 = capacity_axisym_fd(dom);
  auto [lo2, hi2] = sol2.meridian->interior_range();
  CHECK(lo2 > 0.0);
  CHECK(hi2 < 1.0);
}

TEST_CASE("prolate boundary beats the equal-volume round sphere (flat PFS direction)") {
  auto flat = RadialConformalMetric::flat(1e-3);
  auto curve = MeridianCurve::from_mu_profile([](double mu) { return 2.0 * (1.0 + 0.3 * mu * mu); });
  AxisymDomainSpec dom(curve, flat, 60.0, 192, 96);
  auto sol = capacity_axisym_fd(dom);
  const double volume = enclosed_volume(flat, curve, 1e-3);
  const double round_equiv = std::cbrt(3.0 * volume / (4.0 * kPi));
  CHECK(sol.capacity > round_equiv + 5.0 * sol.grid_error);
}

TEST_CASE("flat ellipsoid capacity against the closed form") {
  auto flat = RadialConformalMetric::flat(1e-3);
  auto curve = MeridianCurve::ellipsoid(1.0, 2.0);
  AxisymDomainSpec dom(curve, flat, 30.0, 256, 128);
  auto sol = capacity_axisym_fd(dom);
  CHECK(sol.capacity == doctest::Approx(prolate_capacity(1.0, 2.0)).epsilon(4e-3));
}

TEST_CASE("boundary gradient and asymptotic fit from the meridian field") {
  auto metric = RadialConformalMetric::schwarzschild(SchwarzschildSpec(2.0, 0.5));
  auto sol = capacity_axisym_fd(round_domain(1.0, metric, 160, 80, 16.0));
  CHECK(sol.capacity == doctest::Approx(2.0).epsilon(5e-3));
  auto bg = boundary_gradient_meridian(*sol.meridian, metric);
  // Horizon boundary: H = 0 < 4 |grad phi|; closed form |grad phi| = 1/8.
  CHECK(bg.hypothesis_H_lt_4grad);
  for (std::size_t k = 0; k < bg.mu.size(); k += 16) {
    CHECK(bg.grad_phi_g[k] == doctest::Approx(0.125).epsilon(2e-2));
    CHECK(std::abs(bg.mean_curvature_g[k]) < 1e-8);
  }
  const double fit = asymptotic_fit_meridian(*sol.meridian);
  CHECK(fit == doctest::Approx(sol.capacity).epsilon(1e-2));
}

TEST_CASE("grid and domain validation") {
  auto flat = RadialConformalMetric::flat(1e-3);
  CHECK_THROWS_AS(AxisymDomainSpec(MeridianCurve::sphere(1.0), flat, 20.0, 32, 64),
                  std::invalid_argument);
  CHECK_THROWS_AS(AxisymDomainSpec(MeridianCurve::sphere(1.0), flat, 5.0, 96, 64),
                  std::invalid_argument);
}

TEST_CASE("meridian binary round trip") {
  auto flat = RadialConformalMetric::flat(1e-3);
  auto sol = capacity_axisym_fd(round_domain(1.0, flat, 64, 64));
  const char* path = "meridian_snapshot.bin";
  save_meridian_binary(*sol.meridian, path);
  auto snap = load_meridian_binary(path);
  std::remove(path);
  CHECK(snap.n_xi == 64);
  CHECK(snap.n_theta == 64);
  CHECK(snap.truncation_radius == doctest::Approx(12.0));
  CHECK(snap.metric_hash == metric_hash(flat));
  CHECK(snap.phi.size() == 65u * 65u);
  CHECK(snap.phi[0] == doctest::Approx(1.0));
  // Interior value matches the live field.
  CHECK(snap.phi[32 * 65 + 10] == doctest::Approx(sol.meridian->node(32, 10)));
}

TEST_CASE("512x256 solve stays within the runtime budget") {
  auto flat = RadialConformalMetric::flat(1e-3);
  const auto t0 = std::chrono::steady_clock::now();
  auto sol = capacity_axisym_fd(round_domain(1.0, flat, 512, 256));
  const auto t1 = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(t1 - t0).count();
  CHECK(std::abs(sol.capacity - 1.0) < 0.003);
  CHECK(seconds < 30.0);
  MESSAGE("512x256 solve: ", seconds, " s, ", sol.meridian->cg_iterations, " CG iterations");
}
