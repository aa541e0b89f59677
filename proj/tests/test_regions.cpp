#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "brayiso/regions.hpp"

using namespace brayiso;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
const MassParam kM(1.0);
const SchwarzschildSelector kS{kM};
}  // namespace

TEST_CASE("centered ball area and volume match closed forms") {
  const SurfaceQuadrature q = make_surface_quadrature(32);
  CHECK(boundary_area(CenteredBall{10.0}, kS, q).value == Approx(sphere_area(kM, 10.0)).epsilon(1e-13));
  CHECK(region_volume(CenteredBall{10.0}, kS, q).value == Approx(volume_to(kM, 10.0)).epsilon(1e-13));
  const RadialGraph g = as_radial_graph(CenteredBall{10.0}, 12);
  CHECK(region_volume(g, kS, q).value == Approx(volume_to(kM, 10.0)).epsilon(1e-12));
  CHECK(boundary_area(g, kS, q).value == Approx(sphere_area(kM, 10.0)).epsilon(1e-12));
}

TEST_CASE("offset ball disjoint from the horizon matches the oracle") {
  const SurfaceQuadrature q = make_surface_quadrature(64);
  // Horizon component included: add 16 pi m^2 to the ball's own area.
  const Region two = two_ball_region(40.0, 10.0);
  CHECK(boundary_area(two, kS, q).value == Approx(1320.6830259099767 + 16 * kPi).epsilon(1e-11));
  CHECK(region_volume(two, kS, q).value == Approx(4513.0647861468093).epsilon(1e-11));
  const Region small = two_ball_region(4.0, 1.0);
  CHECK(region_volume(small, kS, q).value == Approx(8.512256233966605).epsilon(1e-11));
  CHECK(boundary_area(small, kS, q).value == Approx(20.161370855328903 + 16 * kPi).epsilon(1e-11));
}

TEST_CASE("Euclidean offset ball") {
  const SurfaceQuadrature q = make_surface_quadrature(16);
  CHECK(boundary_area(OffsetBall{{20.0, 0.0, 0.0}, 5.0}, EuclideanSelector{}, q).value ==
        Approx(100 * kPi).epsilon(1e-13));
}

TEST_CASE("ball union volume is additive") {
  const SurfaceQuadrature q = make_surface_quadrature(32);
  const OffsetBall a{{20.0, 0.0, 0.0}, 5.0}, b{{-30.0, 1.0, 0.0}, 3.0};
  const double sum = region_volume(BallUnion{{a}}, kS, q).value + region_volume(BallUnion{{b}}, kS, q).value;
  CHECK(region_volume(BallUnion{{a, b}}, kS, q).value == Approx(sum).epsilon(1e-13));
}

TEST_CASE("offset ball containing the horizon") {
  const SurfaceQuadrature q = make_surface_quadrature(48);
  const OffsetBall b{{2.0, 0.0, 0.0}, 10.0};
  CHECK_FALSE(has_horizon_component(b, kM.horizon_radius()));
  const Measured v = region_volume(b, kS, q);
  const Measured fine = region_volume(b, kS, q.refined());
  CHECK(v.value == Approx(fine.value).epsilon(1e-10));
  CHECK(v.value > volume_to(kM, 8.0));
  CHECK(v.value < volume_to(kM, 12.0));
  CHECK(min_boundary_radius(b) == Approx(8.0));
  CHECK(max_boundary_radius(b) == Approx(12.0));
}

TEST_CASE("invalid regions are rejected") {
  CHECK_THROWS_AS(validate_region(OffsetBall{{0.6, 0.0, 0.0}, 0.3}, 0.5), std::domain_error);
  CHECK_THROWS_AS(validate_region(BallUnion{{OffsetBall{{5, 0, 0}, 2}, OffsetBall{{7, 0, 0}, 1}}}, 0.5),
                  std::domain_error);
  CHECK_THROWS_AS(validate_region(RadialGraph{4, std::vector<double>(32, 0.4)}, 0.5), std::domain_error);
  CHECK_THROWS_AS(validate_region(CenteredBall{0.2}, 0.5), std::domain_error);
  CHECK_NOTHROW(validate_region(two_ball_region(10.0, 3.0), 0.5));
}

TEST_CASE("off-center classification") {
  const SurfaceQuadrature q = make_surface_quadrature(32);
  const OffCenterReport c = off_center_classify(CenteredBall{10.0}, kS, 2.0, q);
  CHECK(c.r == Approx(10.0));
  CHECK(c.eta == 0.0);
  CHECK(c.matched_radius_ok);
  const OffCenterReport t = off_center_classify(two_ball_region(40.0, 10.0), kS, 2.0, q);
  CHECK(t.eta > 1.0);  // the whole far ball lies outside B_{2r}
  CHECK(t.eta == Approx(t.outside_area / t.sphere_area));
  CHECK_THROWS_AS(off_center_classify(CenteredBall{10.0}, EuclideanSelector{}, 2.0, q), std::domain_error);
  CHECK_THROWS_AS(off_center_classify(CenteredBall{10.0}, kS, 1.0, q), std::domain_error);
}

TEST_CASE("matched radius under a perturbation") {
  const SurfaceQuadrature q = make_surface_quadrature(24);
  PerturbationSpec p;
  p.amplitude = 1.0;
  p.modes = {{0, 0, 0.5}, {2, 0, 0.5}};
  const PerturbedMetric g(p);
  const double V = region_volume(CenteredBall{30.0}, g, q).value;
  CHECK(matched_radius(g, V, q) == Approx(30.0).epsilon(1e-12));
  const Measured ex = region_volume_excess(CenteredBall{30.0}, g, q);
  CHECK(V - volume_to(kM, 30.0) == Approx(ex.value).epsilon(1e-8));
  p.amplitude = 0.0;
  const PerturbedMetric zero(p);
  CHECK(matched_radius(zero, volume_to(kM, 30.0), q) == radius_for_volume(kM, volume_to(kM, 30.0)));
}

TEST_CASE("adding a coordinate ball") {
  const Region t = with_coordinate_ball(two_ball_region(40.0, 10.0), 1.0);
  const SurfaceQuadrature q = make_surface_quadrature(32);
  CHECK_FALSE(has_horizon_component(t, 0.5));
  CHECK(region_volume(t, kS, q).value ==
        Approx(region_volume(two_ball_region(40.0, 10.0), kS, q).value + volume_to(kM, 1.0)).epsilon(1e-12));
}

TEST_CASE("chart transfer preserves angles and matches chart_radius") {
  const ChartParams chart = chart_params(kM, 10.0);
  const std::vector<Vec3> pts{{20.0, 0.0, 0.0}, {0.0, -30.0, 40.0}};
  const auto cp = to_chart(pts, chart);
  CHECK(cp[1].s == Approx(chart_radius(chart, 50.0)));
  CHECK(cp[1].direction.z == Approx(0.8));
  CHECK_THROWS_AS(to_chart(std::vector<Vec3>{{5.0, 0.0, 0.0}}, chart), std::domain_error);
}

TEST_CASE("chart areas of centered spheres") {
  const SurfaceQuadrature q = make_surface_quadrature(16);
  const ChartParams chart = chart_params(kM, 10.0);
  const ChartSelector flat{chart, std::nullopt, ChartMetric::Frame::flat};
  const double s = chart_radius(chart, 15.0);
  CHECK(boundary_integral(CenteredBall{15.0}, *make_metric(flat), q, {}).value ==
        Approx(4 * kPi * s * s).epsilon(1e-12));
}
