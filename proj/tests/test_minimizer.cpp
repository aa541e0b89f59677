#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "brayiso/minimizer.hpp"

using namespace brayiso;
using doctest::Approx;

namespace {
const MassParam kM(1.0);

double fd_gradient(const GraphSurface& s, const MetricField& g, std::size_t k) {
  const double h = 1e-4 * s.rho[k];
  GraphSurface p = s, n = s;
  p.rho[k] += h;
  n.rho[k] -= h;
  return (area_and_gradient(p, g).area - area_and_gradient(n, g).area) / (2.0 * h);
}
}  // namespace

TEST_CASE("area of a centered sphere graph") {
  const SchwarzschildMetric g(kM);
  const AreaGradient a = area_and_gradient(sphere_surface(8, 10.0), g);
  CHECK(a.area == Approx(sphere_area(kM, 10.0)).epsilon(1e-13));
  // Radially uniform: the gradient per unit weight is the same at every node.
  const SurfaceQuadrature q = make_surface_quadrature(8);
  const double ref = a.gradient[0] / q.weights[0];
  for (std::size_t k = 0; k < q.size(); ++k) CHECK(a.gradient[k] / q.weights[k] == Approx(ref).epsilon(1e-12));
}

TEST_CASE("flat first variation of a sphere") {
  const EuclideanMetric g;
  const double rho = 3.0;
  const AreaGradient a = area_and_gradient(sphere_surface(6, rho), g);
  const SurfaceQuadrature q = make_surface_quadrature(6);
  for (std::size_t k = 0; k < q.size(); ++k) CHECK(a.gradient[k] == Approx(q.weights[k] * 2.0 / rho * rho * rho));
}

TEST_CASE("analytic gradient matches central differences") {
  const SchwarzschildMetric s(kM);
  PerturbationSpec p;
  p.amplitude = 0.5;
  p.modes = {{2, 1, 0.6}, {1, 0, 0.4}};
  p.kind = PerturbationSpec::Tensor::radial;
  const PerturbedMetric r(p);
  const GraphSurface surf = random_surface(10, 6.0, 0.15, 4, 11);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, surf.rho.size() - 1);
  for (const MetricField* g : {static_cast<const MetricField*>(&s), static_cast<const MetricField*>(&r)}) {
    const AreaGradient a = area_and_gradient(surf, *g);
    for (int t = 0; t < 10; ++t) {
      const std::size_t k = pick(rng);
      CHECK(a.gradient[k] == Approx(fd_gradient(surf, *g, k)).epsilon(1e-6));
    }
  }
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(area_and_gradient(sphere_surface(6, 0.4), SchwarzschildMetric(kM)), std::domain_error);
  GraphSurface bad = sphere_surface(6, 5.0);
  bad.rho.pop_back();
  CHECK_THROWS_AS(bad.validate(0.5), std::domain_error);
  CHECK_THROWS_AS(random_surface(6, 5.0, 0.1, 6, 1), std::domain_error);
}

TEST_CASE("volume projection") {
  const SchwarzschildMetric g(kM);
  const GraphSurface s = sphere_surface(8, 10.0);
  const GraphSurface same = project_volume(s, kM, volume_to(kM, 10.0));
  CHECK(same.rho == s.rho);
  const GraphSurface grown = project_volume(s, kM, volume_to(kM, 12.0));
  for (double r : grown.rho) CHECK(r == Approx(12.0).epsilon(1e-9));
  const GraphSurface rnd = random_surface(8, 10.0, 0.2, 3, 9);
  const double target = 5000.0;
  const GraphSurface p = project_volume(rnd, kM, target);
  CHECK(graph_volume(p, g) == Approx(target).epsilon(1e-12));
  const GraphSurface again = project_volume(p, kM, target);
  for (std::size_t k = 0; k < p.rho.size(); ++k) CHECK(again.rho[k] == Approx(p.rho[k]).epsilon(1e-12));
  const GraphSurface thin = project_volume(s, kM, 1e-6);
  CHECK(thin.rho[0] > kM.horizon_radius());
  CHECK(graph_volume(thin, g) == Approx(1e-6).epsilon(1e-6));
  CHECK_THROWS_AS(project_volume(s, kM, -1.0), std::domain_error);
}

TEST_CASE("geometric mean curvature of centered spheres") {
  for (double r : {2.0, 20.0}) {
    const CurvatureField H = mean_curvature(sphere_surface(8, r), SchwarzschildMetric(kM));
    CHECK(H.geometric);
    CHECK(H.mean == Approx(sphere_mean_curvature(kM, r)).epsilon(1e-12));
    CHECK(H.deviation <= 1e-12);
  }
}

TEST_CASE("centered sphere is a stationary point") {
  const MinimizeReport r = minimize(sphere_surface(12, 20.0), kM, volume_to(kM, 20.0), OptimizerConfig{});
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.cmc_deviation <= 1e-10);
  CHECK(r.mean_H == Approx(sphere_mean_curvature(kM, 20.0)).epsilon(1e-12));
}

TEST_CASE("ellipsoidal initial surface converges to the centered sphere") {
  OptimizerConfig cfg;
  cfg.grad_tol = 1e-6;
  const MinimizeReport r = minimize(ellipsoidal_surface(16, 50.0, 0.2), kM, volume_to(kM, 50.0), cfg);
  CHECK(r.converged);
  CHECK(r.centering <= 1e-3);
  CHECK(r.mean_H == Approx(sphere_mean_curvature(kM, 50.0)).epsilon(1e-4));
  CHECK(r.cmc_deviation <= 10 * cfg.grad_tol);
  CHECK(r.area >= *r.profile_area - 1e-9 * r.area);
  for (std::size_t k = 1; k < r.area_history.size(); ++k)
    CHECK(r.area_history[k] <= r.area_history[k - 1] * (1 + 1e-13));
  CHECK(std::abs(r.volume - r.target_volume) <= 1e-12 * r.target_volume);
}

TEST_CASE("random initial surface converges") {
  OptimizerConfig cfg;
  cfg.seed = 4;
  const MinimizeReport r =
      minimize(random_surface(12, 30.0, 0.1, 5, cfg.seed), kM, volume_to(kM, 30.0), cfg);
  CHECK(r.converged);
  CHECK(r.cmc_deviation <= 10 * cfg.grad_tol);
  CHECK(r.centering <= 1e-3);
}

TEST_CASE("iteration cap yields a non-converged report") {
  OptimizerConfig cfg;
  cfg.max_iters = 1;
  cfg.grad_tol = 1e-12;
  const MinimizeReport r = minimize(ellipsoidal_surface(12, 20.0, 0.2), kM, volume_to(kM, 20.0), cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
  OptimizerConfig bad;
  bad.max_iters = 0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("perturbed minimizer stays close to the centered sphere") {
  PerturbationSpec p;
  p.amplitude = 1.0;
  p.modes = {{2, 0, 1.0}};
  OptimizerConfig cfg;
  cfg.grad_tol = 1e-7;
  std::vector<double> centering;
  for (double r : {20.0, 50.0}) {
    const double V = graph_volume(sphere_surface(12, r), PerturbedMetric(p));
    const MinimizeReport rep = minimize(ellipsoidal_surface(12, r, 0.2), kM, V, cfg, MetricSelector{p});
    CHECK(rep.converged);
    CHECK_FALSE(rep.profile_area.has_value());
    centering.push_back(rep.centering);
  }
  CHECK(centering[1] < centering[0]);
}
