#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "brayiso/decay.hpp"

using namespace brayiso;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
const SurfaceQuadrature kQ = make_surface_quadrature(32);

PerturbationSpec bump(PerturbationSpec::Tensor kind) {
  PerturbationSpec p;
  p.amplitude = 1.0;
  p.modes = {{0, 0, 0.5}, {2, 0, 0.5}};
  p.kind = kind;
  p.outer_cutoff = 1e4;
  return p;
}
}  // namespace

TEST_CASE("co-area bound on the plane") {
  const BoundCheck b = coarea_bound_check(PlaneAnnulus{1.0}, 3.0, kQ);
  CHECK(b.integral == Approx(6.2831853071795865).epsilon(1e-10));
  CHECK(b.theta == Approx(kPi));
  CHECK(b.bound == Approx(3 * kPi));
  CHECK(b.holds);
  const BoundCheck c = coarea_bound_check(PlaneAnnulus{2.0}, 4.0, kQ);
  CHECK(c.integral == Approx(0.78539816339744831).epsilon(1e-10));
  for (double gamma : {2.5, 3.0, 4.0, 6.0}) CHECK(coarea_bound_check(PlaneAnnulus{1.0}, gamma, kQ).holds);
  CHECK_THROWS_AS(coarea_bound_check(PlaneAnnulus{1.0}, 2.0, kQ), std::domain_error);
}

TEST_CASE("beta bound on truncated plane annuli") {
  // The growth constant is the exact sup pi (1 - 1/R^2), attained at sigma = R.
  const BoundCheck a = beta_bound_check(PlaneAnnulus{1.0, 10.0}, 1.0, kQ);
  CHECK(a.integral == Approx(14.46756882483093).epsilon(1e-10));
  CHECK(a.bound == Approx(43.984541087767826).epsilon(1e-10));
  CHECK(a.holds);
  const BoundCheck b = beta_bound_check(PlaneAnnulus{1.0, 100.0}, 1.0, kQ);
  CHECK(b.integral == Approx(28.935137649661859).epsilon(1e-10));
  CHECK(b.bound == Approx(444.24386498645504).epsilon(1e-10));
  CHECK_THROWS_AS(beta_bound_check(PlaneAnnulus{1.0}, 1.0, kQ), std::domain_error);
  CHECK_THROWS_AS(beta_bound_check(PlaneAnnulus{1.0, 10.0}, 2.0, kQ), std::domain_error);
}

TEST_CASE("growth constant of sphere shells") {
  const GrowthProfile g = growth_profile(SphereShells{1.0, {2.0, 4.0, 8.0}}, kQ);
  CHECK(g.theta == Approx(21 * kPi / 4));  // attained at sigma = 8: 4 pi (4 + 16 + 64) / 64
  CHECK(g.exterior_area == Approx(4 * kPi * (4 + 16 + 64)));
  CHECK(coarea_bound_check(SphereShells{1.0, {2.0, 4.0, 8.0}}, 3.0, kQ).holds);
}

TEST_CASE("region boundaries have finite growth and satisfy the bounds") {
  const RegionBoundary s{1.0, two_ball_region(40.0, 10.0)};
  const GrowthProfile g = growth_profile(s, kQ);
  CHECK(g.exterior_area == Approx(400 * kPi).epsilon(1e-10));
  CHECK(coarea_bound_check(s, 3.0, kQ).holds);
  CHECK(beta_bound_check(s, 1.0, kQ).holds);
}

TEST_CASE("exterior radial integral") {
  CHECK(exterior_radial_integral(2.0, 2.0).closed_form == Approx(kPi / 6).epsilon(1e-14));
  CHECK(exterior_radial_integral(2.0, 1.0).closed_form == Approx(4.188790204786391).epsilon(1e-14));
  CHECK(exterior_radial_integral(1.5, 1.0).closed_form == Approx(12.566370614359173).epsilon(1e-14));
  for (double a = 1.2; a < 2.81; a += 0.2)
    for (double r0 : {1.0, 2.0, 4.0}) CHECK(exterior_radial_integral(a, r0).relative_difference() <= 1e-8);
  CHECK_THROWS_AS(exterior_radial_integral(3.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(exterior_radial_integral(2.0, 0.5), std::domain_error);
}

TEST_CASE("volume difference bound") {
  for (auto kind : {PerturbationSpec::Tensor::isotropic, PerturbationSpec::Tensor::radial}) {
    const PerturbationSpec p = bump(kind);
    CHECK(volume_density_constant(p) > 0.0);
    for (double alpha : {1.5, 2.0, 2.5}) {
      const VolumeDiffCheck c = volume_diff_bound_check(p, CenteredShell{1.0, 200.0}, alpha, 1.0, kQ);
      CHECK(c.holds);
      CHECK(c.lhs > 0.0);
    }
    CHECK(volume_diff_bound_check(p, two_ball_region(40.0, 10.0), 1.5, 1.0, kQ).holds);
  }
}

TEST_CASE("zero perturbation gives zero volume difference") {
  PerturbationSpec p = bump(PerturbationSpec::Tensor::isotropic);
  p.amplitude = 0.0;
  const VolumeDiffCheck c = volume_diff_bound_check(p, CenteredShell{1.0, 50.0}, 2.0, 1.0, kQ);
  CHECK(c.lhs == 0.0);
  CHECK(c.holds);
}
