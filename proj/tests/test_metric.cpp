#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "brayiso/metric.hpp"
#include "brayiso/schwarzschild.hpp"

using namespace brayiso;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

PerturbationSpec bump(PerturbationSpec::Tensor kind) {
  PerturbationSpec p;
  p.amplitude = 0.8;
  p.modes = {{0, 0, 0.4}, {2, 1, 0.3}, {3, -2, 0.3}};
  p.kind = kind;
  p.inner_cutoff = 1.0;
  p.outer_cutoff = 40.0;
  return p;
}
}  // namespace

TEST_CASE("Schmidt harmonics") {
  const Vec3 z{0.0, 0.0, 1.0}, x{1.0, 0.0, 0.0};
  CHECK(schmidt_harmonic(0, 0, x) == Approx(1.0));
  CHECK(schmidt_harmonic(2, 0, z) == Approx(1.0));
  CHECK(schmidt_harmonic(2, 0, x) == Approx(-0.5));
  CHECK(schmidt_harmonic(1, 1, x) == Approx(1.0));
  CHECK(schmidt_harmonic(1, -1, Vec3{0.0, 1.0, 0.0}) == Approx(1.0));
  // Schmidt semi-normalization keeps |Y| <= 1.
  for (int l = 0; l <= 5; ++l)
    for (int m = -l; m <= l; ++m)
      for (double t = 0.05; t < kPi; t += 0.3)
        for (double p = 0.0; p < 2 * kPi; p += 0.7) {
          const Vec3 u{std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
          CHECK(std::abs(schmidt_harmonic(l, m, u)) <= 1.0 + 1e-12);
        }
}

TEST_CASE("Schwarzschild metric field agrees with the closed forms") {
  const MassParam m(1.0);
  const SchwarzschildMetric g(m);
  const Vec3 x{3.0, -4.0, 12.0};
  const double phi = conformal_factor(m, 13.0);
  CHECK(g.tensor(x)(0, 0) == Approx(std::pow(phi, 4)));
  CHECK(g.tensor(x)(0, 1) == 0.0);
  CHECK(g.volume_density(x) == Approx(std::pow(phi, 6)));
  CHECK(*g.conformal_factor(x) == Approx(phi));
  CHECK(g.horizon_area() == Approx(16 * kPi));
  CHECK(g.radial_volume(x, 10.0) * 4 * kPi == Approx(volume_to(m, 10.0)));
  const double h = 1e-5;
  const Vec3 n = (1.0 / 13.0) * x;
  const double fd = (g.tensor((13.0 + h) * n)(2, 2) - g.tensor((13.0 - h) * n)(2, 2)) / (2 * h);
  CHECK(g.radial_derivative(x)(2, 2) == Approx(fd).epsilon(1e-7));
}

TEST_CASE("perturbation validation") {
  PerturbationSpec p = bump(PerturbationSpec::Tensor::isotropic);
  CHECK_NOTHROW(p.validate());
  p.modes.push_back({1, 0, 0.5});
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  p = bump(PerturbationSpec::Tensor::isotropic);
  p.outer_cutoff = 1.5;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  p = bump(PerturbationSpec::Tensor::isotropic);
  p.amplitude = 50.0;
  CHECK_THROWS_AS(PerturbedMetric{p}, std::domain_error);
  p.modes = {{1, 2, 0.5}};
  p.amplitude = 0.1;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
}

TEST_CASE("cutoff ramps smoothly and has compact support") {
  const PerturbationSpec p = bump(PerturbationSpec::Tensor::isotropic);
  CHECK(p.cutoff(0.9) == 0.0);
  CHECK(p.cutoff(3.0) == 1.0);
  CHECK(p.cutoff(81.0) == 0.0);
  for (double r : {1.3, 1.7, 45.0, 70.0}) {
    const double h = 1e-6;
    CHECK(p.cutoff_derivative(r) == Approx((p.cutoff(r + h) - p.cutoff(r - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("perturbed metric equals Schwarzschild outside the support") {
  const MassParam m(1.0);
  const SchwarzschildMetric s(m);
  for (auto kind : {PerturbationSpec::Tensor::isotropic, PerturbationSpec::Tensor::radial}) {
    const PerturbedMetric g(bump(kind));
    for (Vec3 x : {Vec3{0.7, 0.1, 0.0}, Vec3{100.0, 2.0, -3.0}}) {
      CHECK(g.tensor(x)(1, 1) == Approx(s.tensor(x)(1, 1)));
      CHECK(g.volume_excess_density(x) == 0.0);
    }
  }
}

TEST_CASE("volume excess density matches sqrt det difference") {
  for (auto kind : {PerturbationSpec::Tensor::isotropic, PerturbationSpec::Tensor::radial}) {
    const PerturbedMetric g(bump(kind));
    for (Vec3 x : {Vec3{2.5, 0.3, 1.0}, Vec3{0.0, 7.0, -4.0}, Vec3{20.0, 1.0, 1.0}}) {
      const double phi = conformal_factor(MassParam(1.0), norm(x));
      CHECK(g.volume_excess_density(x) == Approx(std::sqrt(det(g.tensor(x))) - std::pow(phi, 6)).epsilon(1e-9));
      CHECK(g.volume_density(x) == Approx(std::sqrt(det(g.tensor(x)))).epsilon(1e-13));
    }
  }
}

TEST_CASE("radial volume excess integrates the excess density") {
  const PerturbedMetric g(bump(PerturbationSpec::Tensor::radial));
  const Vec3 dir{0.6, 0.0, 0.8};
  const double R = 60.0;
  // Midpoint rule on a fine grid as an independent route.
  double sum = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double t = 0.5 + (R - 0.5) * (k + 0.5) / n;
    sum += g.volume_excess_density(t * dir) * t * t;
  }
  sum *= (R - 0.5) / n;
  CHECK(g.radial_volume_excess(dir, R) == Approx(sum).epsilon(1e-7));
}

TEST_CASE("isotropic perturbation is conformally flat") {
  const PerturbedMetric g(bump(PerturbationSpec::Tensor::isotropic));
  const Vec3 x{2.0, 1.0, 3.0};
  const double psi = *g.conformal_factor(x);
  CHECK(std::pow(psi, 4) == Approx(g.tensor(x)(0, 0)));
  const Vec3 grad = g.log_conformal_gradient(x);
  const double h = 1e-6;
  const double fd = (std::log(*g.conformal_factor(x + Vec3{0, h, 0})) - std::log(*g.conformal_factor(x - Vec3{0, h, 0}))) / (2 * h);
  CHECK(grad.y == Approx(fd).epsilon(1e-6));
  const PerturbedMetric r(bump(PerturbationSpec::Tensor::radial));
  CHECK_FALSE(r.conformal_factor(x).has_value());
}

TEST_CASE("chart metric pulls back to g_m outside the chart sphere") {
  const MassParam m(1.0);
  const ChartParams chart = chart_params(m, 10.0);
  const ChartMetric gmc(chart, ChartMetric::Frame::gmc);
  const SchwarzschildMetric s(m);
  for (Vec3 x : {Vec3{10.0, 0.0, 0.0}, Vec3{3.0, 14.0, -20.0}, Vec3{300.0, 1.0, 2.0}})
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(gmc.tensor(x)(i, j) == Approx(s.tensor(x)(i, j)).epsilon(1e-11).scale(1.0));
  CHECK_THROWS_AS(gmc.tensor(Vec3{5.0, 0.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(gmc.horizon_chart_radius(), std::domain_error);
  const ChartMetric with_w(chart, ChartMetric::Frame::gmc, solve_w(chart).profile);
  CHECK(with_w.horizon_area() == Approx(chart.alpha * 4 * kPi * std::pow(with_w.horizon_chart_radius(), 2)));
}

TEST_CASE("metric selectors") {
  CHECK(selector_name(EuclideanSelector{}) == "euclidean");
  CHECK(selector_name(SchwarzschildSelector{MassParam(1.0)}) == "schwarzschild");
  CHECK(selector_name(bump(PerturbationSpec::Tensor::radial)) == "perturbed");
  CHECK(make_metric(EuclideanSelector{})->volume_density({1, 2, 3}) == 1.0);
}
