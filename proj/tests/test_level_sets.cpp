#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "capq/level_sets.hpp"

using namespace capq;

TEST_CASE("chebyshev thresholds stay inside (eps, 1-eps)") {
  auto t = chebyshev_thresholds(48);
  CHECK(t.size() == 48);
  CHECK(t.front() > 0.02);
  CHECK(t.back() < 0.98);
  for (std::size_t k = 0; k + 1 < t.size(); ++k) CHECK(t[k] < t[k + 1]);
}

TEST_CASE("level sets of the schwarzschild horizon potential") {
  // phi = m/(r + m/2) with m = 2: phi = 2/(r+1); {phi = 1/2} is r = 3.
  auto metric = RadialConformalMetric::schwarzschild(SchwarzschildSpec(2.0, 0.5));
  AxisymDomainSpec dom(MeridianCurve::sphere(1.0), metric, 50.0, 256, 96);
  auto sol = capacity_axisym_fd(dom);
  auto data = extract_level_sets(sol, {0.5}, 1.0);

  // Contour sits at r = 3 for every theta.
  for (double r : data.contour_r[0]) {
    CHECK(r == doctest::Approx(3.0).epsilon(2e-3));
  }
  // Area: 4 pi u(3)^4 * 9 = 4 pi (4/3)^4 * 9.
  const double area_exact = 4.0 * kPi * std::pow(4.0 / 3.0, 4) * 9.0;
  CHECK(data.area[0] == doctest::Approx(area_exact).epsilon(5e-3));
  // Flux through the level set equals the capacity within 1e-3 relative.
  CHECK(data.flux[0] == doctest::Approx(sol.capacity).epsilon(1e-3));
}

TEST_CASE("flat potential level sets and volumes") {
  // phi = 1/r from the unit sphere; {phi = 0.25} is r = 4.
  auto flat = RadialConformalMetric::flat(1e-3);
  AxisymDomainSpec dom(MeridianCurve::sphere(1.0), flat, 64.0, 256, 96);
  auto sol = capacity_axisym_fd(dom);
  auto data = extract_level_sets(sol, {0.25, 0.5}, 1.0);

  CHECK(data.contour_r[0][10] == doctest::Approx(4.0).epsilon(2e-3));
  CHECK(data.contour_r[1][10] == doctest::Approx(2.0).epsilon(2e-3));
  // Signed volume between r = 4 and the unit reference sphere.
  CHECK(data.volume[0] == doctest::Approx(4.0 * kPi / 3.0 * (64.0 - 1.0)).epsilon(5e-3));
  // Coarea factor: V'(t) = oint dsigma/|grad phi| = 4 pi r^4 (phi = 1/r).
  CHECK(data.coarea_vprime[0] == doctest::Approx(4.0 * kPi * 256.0).epsilon(5e-3));
  // Flux conservation across levels.
  for (std::size_t k = 0; k < data.thresholds.size(); ++k) {
    CHECK(data.flux[k] == doctest::Approx(sol.capacity).epsilon(1e-3));
  }
}

TEST_CASE("thresholds out of range or non-bracketed are rejected") {
  auto flat = RadialConformalMetric::flat(1e-3);
  AxisymDomainSpec dom(MeridianCurve::sphere(1.0), flat, 20.0, 96, 64);
  auto sol = capacity_axisym_fd(dom);
  CHECK_THROWS_AS((void)extract_level_sets(sol, {1.5}, 1.0), std::invalid_argument);
  // phi > 1/Rt-ish everywhere on the grid: a tiny threshold never brackets.
  CHECK_THROWS_AS((void)extract_level_sets(sol, {1e-4}, 1.0), std::runtime_error);
}

TEST_CASE("contour curve interpolates the extracted level set") {
  auto flat = RadialConformalMetric::flat(1e-3);
  AxisymDomainSpec dom(MeridianCurve::sphere(1.0), flat, 40.0, 128, 64);
  auto sol = capacity_axisym_fd(dom);
  auto data = extract_level_sets(sol, {0.5}, 1.0);
  auto curve = contour_curve(data, 0);
  CHECK(curve(0.7) == doctest::Approx(2.0).epsilon(5e-3));
}
