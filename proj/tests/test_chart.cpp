#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "brayiso/chart.hpp"

using namespace brayiso;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(a * std::pow(b / a, k / (n - 1.0)));
  return g;
}
}  // namespace

TEST_CASE("chart parameters match the oracle") {
  const ChartParams c = chart_params(MassParam(1.0), 10.0);
  CHECK(c.c == Approx(11.399010737071917).epsilon(1e-14));
  CHECK(c.alpha == Approx(0.93545493577093801).epsilon(1e-14));
  CHECK(c.V0 == Approx(433.64691152454224).epsilon(1e-12));
  const ChartParams d = chart_params(MassParam(1.0), 100.0);
  CHECK(d.c == Approx(101.33973956402708).epsilon(1e-14));
  CHECK(d.alpha == Approx(0.99335545106779112).epsilon(1e-14));
  CHECK_THROWS_AS(chart_params(MassParam(1.0), 0.5), std::domain_error);
}

TEST_CASE("cone area of S_c equals the area of S_r") {
  for (double r : {1.0, 10.0, 1e3}) {
    const MassParam m(1.0);
    const ChartParams c = chart_params(m, r);
    CHECK(c.alpha * 4.0 * kPi * c.c * c.c == Approx(sphere_area(m, r)).epsilon(1e-13));
    CHECK(4.0 * kPi * c.c * c.c * c.c / 3.0 + c.V0 == Approx(volume_to(m, r)).epsilon(1e-13));
  }
}

TEST_CASE("u_c glues to the cone with one-sided derivative mismatch linear in h") {
  const ChartParams c = chart_params(MassParam(1.0), 100.0);
  CHECK(std::abs(u_profile(c, c.c) - c.alpha) <= 1e-9);
  CHECK(u_profile(c, 0.5 * c.c) == c.alpha);
  CHECK(std::abs(u_profile_derivative(c, c.c)) <= 1e-12);
  double prev = 0.0;
  for (double h : {1e-2, 1e-3, 1e-4}) {
    const double mismatch = std::abs((u_profile(c, c.c + h) - u_profile(c, c.c)) / h);
    if (prev > 0.0) CHECK(mismatch / prev == Approx(0.1).epsilon(0.05));
    prev = mismatch;
  }
}

TEST_CASE("u_c is increasing within (alpha, 1)") {
  for (double r : {10.0, 100.0, 1000.0}) {
    const ChartParams c = chart_params(MassParam(1.0), r);
    const RadialProfile u = sample_u_profile(c, log_grid(c.c * (1 + 1e-9), 1e4 * c.c, 1000));
    for (std::size_t k = 0; k < u.size(); ++k) {
      CHECK(u.values[k] > c.alpha);
      CHECK(u.values[k] < 1.0);
      CHECK(u.derivs[k] > 0.0);
      if (k > 0) CHECK(u.values[k] > u.values[k - 1]);
    }
  }
}

TEST_CASE("u_c derivative satisfies u' = H - 2u/s") {
  const ChartParams c = chart_params(MassParam(1.0), 10.0);
  for (double s : {1.5 * c.c, 4.0 * c.c, 40.0 * c.c}) {
    const double h = 1e-5 * s;
    const double fd = (u_profile(c, s + h) - u_profile(c, s - h)) / (2.0 * h);
    CHECK(u_profile_derivative(c, s) == Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("gap estimate matches the oracle and holds") {
  const ChartParams c = chart_params(MassParam(1.0), 100.0);
  const GapReport g = u_gap_bound(c, 2.0);
  CHECK(g.lhs == Approx(0.0020871389339492843).epsilon(1e-10));
  CHECK(g.rhs == Approx(0.0010278955433949336).epsilon(1e-13));
  CHECK(g.holds);
  for (double r : {100.0, 1000.0})
    for (double tau : {1.5, 2.0, 4.0}) CHECK(u_gap_bound(chart_params(MassParam(1.0), r), tau).holds);
  CHECK_THROWS_AS(u_gap_bound(c, 1.0), std::domain_error);
}

TEST_CASE("first integral is conserved along u_c") {
  for (double r : {10.0, 100.0, 1000.0}) {
    const ChartParams c = chart_params(MassParam(1.0), r);
    const FirstIntegralTrace t = first_integral(sample_u_profile(c, log_grid(c.c, 1e3 * c.c, 400)));
    CHECK(t.relative_deviation() <= 1e-7);
  }
}

TEST_CASE("first integral rejects interior profiles") {
  const ChartParams c = chart_params(MassParam(1.0), 10.0);
  const WSolution w = solve_w(c);
  CHECK_THROWS_AS(first_integral(w.profile), std::domain_error);
}

TEST_CASE("interior w reproduces the horizon") {
  for (double mass : {1.0, 2.0}) {
    const MassParam m(mass);
    const ChartParams c = chart_params(m, 10.0 * mass);
    const WSolution w = solve_w(c);
    CHECK(w.profile.grid.back() == Approx(c.c));
    CHECK(w.profile.values.back() == Approx(1.0));
    const InnerMinimum mn = inner_area_minimum(c, w.profile);
    CHECK(mn.conclusive);
    CHECK(mn.area_min == Approx(16.0 * kPi * mass * mass).epsilon(1e-8));
    if (mass == 1.0) CHECK(mn.s_min == Approx(0.7581319258762346).epsilon(1e-8));
    for (std::size_t k = 0; k < w.profile.size(); k += 5)
      if (w.profile.values[k] <= 1e3)
        CHECK(chart_hawking_mass(c, w.profile, w.profile.grid[k]) == Approx(mass).epsilon(1e-5));
  }
}

TEST_CASE("tiny ODE step cap reports a failure with partial samples") {
  const ChartParams c = chart_params(MassParam(1.0), 10.0);
  OdeControl ctrl;
  ctrl.max_steps = 5;
  try {
    solve_w(c, ctrl);
    FAIL("expected OdeFailure");
  } catch (const OdeFailure& e) {
    CHECK(e.partial().size() >= 1);
  } catch (const NumericError&) {
  }
}

TEST_CASE("chart radius is the volume-preserving map") {
  const MassParam m(1.0);
  const ChartParams c = chart_params(m, 10.0);
  CHECK(chart_radius(c, 10.0) == Approx(c.c).epsilon(1e-13));
  const double s = chart_radius(c, 30.0);
  CHECK(4.0 * kPi * s * s * s / 3.0 + c.V0 == Approx(volume_to(m, 30.0)).epsilon(1e-13));
  const double fd = (chart_radius(c, 30.0 + 1e-4) - chart_radius(c, 30.0 - 1e-4)) / 2e-4;
  CHECK(chart_radius_derivative(c, 30.0) == Approx(fd).epsilon(1e-7));
  CHECK_THROWS_AS(chart_radius(c, 5.0), std::domain_error);
}

TEST_CASE("cone scalar curvature") {
  CHECK_THROWS_AS(cone_scalar_curvature(1.0, 3.0), std::domain_error);
  CHECK(cone_scalar_curvature(0.5, 2.0) == Approx(2.0 * (1.0 - 0.125) / (0.5 * 4.0)));
}
