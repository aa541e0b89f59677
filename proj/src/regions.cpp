#include "brayiso/regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "brayiso/errors.hpp"
#include "brayiso/quadrature.hpp"

namespace brayiso {

namespace {

constexpr double kPi = std::numbers::pi;

bool contains_horizon(const OffsetBall& b, double h) {
  return h > 0.0 && norm(b.center) + h <= b.rho;
}

// Distance from the origin to the sphere |x - p| = rho along the unit ray n,
// for balls that contain the origin.
double ray_exit(const OffsetBall& b, Vec3 n) {
  const double pn = dot(n, b.center);
  const double p2 = dot(b.center, b.center);
  return pn + std::sqrt(pn * pn - p2 + b.rho * b.rho);
}

Frame ball_frame(const OffsetBall& b) {
  if (norm(b.center) == 0.0) return Frame{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  return frame_along(b.center);
}

// Parametrized boundary component on a product grid: position, d/dtheta and
// (d/dphi) / sin(theta), with the dx dphi weights of the grid.
struct Patch {
  std::vector<Vec3> X, Xt, Xp;
};

Patch sphere_patch(Vec3 center, double rho, const Frame& f, const SurfaceQuadrature& q) {
  Patch p;
  p.X.reserve(q.size());
  p.Xt.reserve(q.size());
  p.Xp.reserve(q.size());
  for (int i = 0; i < q.n_theta; ++i)
    for (int j = 0; j < q.n_phi; ++j) {
      p.X.push_back(center + rho * f.to_world(q.nodes[q.index(i, j)]));
      p.Xt.push_back(rho * f.to_world(q.e_theta(i, j)));
      p.Xp.push_back(rho * f.to_world(q.e_phi(j)));
    }
  return p;
}

SurfaceQuadrature graph_grid(const RadialGraph& g) { return make_surface_quadrature(g.n_theta); }

Patch graph_patch(const RadialGraph& g, const SurfaceQuadrature& q) {
  const SphericalTransform T(graph_grid(g));
  const auto c = T.analyze(g.rho);
  const auto rho = T.synthesize(c, q, Deriv::value);
  const auto rt = T.synthesize(c, q, Deriv::theta);
  const auto rp = T.synthesize(c, q, Deriv::phi);
  Patch p;
  for (int i = 0; i < q.n_theta; ++i)
    for (int j = 0; j < q.n_phi; ++j) {
      const std::size_t k = q.index(i, j);
      const Vec3 n = q.nodes[k];
      p.X.push_back(rho[k] * n);
      p.Xt.push_back(rt[k] * n + rho[k] * q.e_theta(i, j));
      p.Xp.push_back((rp[k] / q.sin_theta[i]) * n + rho[k] * q.e_phi(j));
    }
  return p;
}

std::vector<Patch> patches(const Region& region, const SurfaceQuadrature& q) {
  const Frame identity{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<Patch> out;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CenteredBall>) {
          out.push_back(sphere_patch({}, r.r, identity, q));
        } else if constexpr (std::is_same_v<T, OffsetBall>) {
          out.push_back(sphere_patch(r.center, r.rho, ball_frame(r), q));
        } else if constexpr (std::is_same_v<T, RadialGraph>) {
          out.push_back(graph_patch(r, q));
        } else {
          for (const auto& b : r.balls) out.push_back(sphere_patch(b.center, b.rho, ball_frame(b), q));
        }
      },
      region);
  return out;
}

double area_element(const MetricField& g, Vec3 X, Vec3 Xt, Vec3 Xp) {
  const Mat3 G = g.tensor(X);
  const double E = form(G, Xt, Xt), F = form(G, Xt, Xp), Gp = form(G, Xp, Xp);
  return std::sqrt(std::max(E * Gp - F * F, 0.0));
}

double integrate_boundary(const Region& region, const MetricField& g, const SurfaceQuadrature& q,
                          const PointWeight& weight, const std::function<bool(Vec3)>& keep) {
  double sum = 0.0;
  for (const Patch& p : patches(region, q))
    for (std::size_t k = 0; k < p.X.size(); ++k) {
      if (keep && !keep(p.X[k])) continue;
      const double a = area_element(g, p.X[k], p.Xt[k], p.Xp[k]);
      sum += q.weights[k] * a * (weight ? weight(p.X[k]) : 1.0);
    }
  return sum;
}

Measured with_coarse(double fine, double coarse) {
  return {fine, std::abs(fine - coarse) + 1e-12 * std::abs(fine)};
}

// Volume of a region: origin rays for star-shaped pieces, a ball-centered
// product grid for balls away from the horizon.
template <class Ray, class Density>
double integrate_volume(const Region& region, double h, const SurfaceQuadrature& q, Ray&& ray, Density&& density) {
  auto star = [&](auto&& radius_of) {
    double sum = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) sum += q.weights[k] * ray(q.nodes[k], radius_of(k));
    return sum;
  };
  auto ball = [&](const OffsetBall& b) {
    if (h > 0.0 && contains_horizon(b, h)) return star([&](std::size_t k) { return ray_exit(b, q.nodes[k]); });
    const Frame f = ball_frame(b);
    const std::size_t nr = static_cast<std::size_t>(std::max(16, q.n_theta / 2));
    const GaussLegendre& gl = gauss_legendre(nr);
    double sum = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      const Vec3 n = f.to_world(q.nodes[k]);
      double radial = 0.0;
      for (std::size_t i = 0; i < nr; ++i) {
        const double t = 0.5 * b.rho * (gl.nodes[i] + 1.0);
        radial += gl.weights[i] * t * t * density(b.center + t * n);
      }
      sum += q.weights[k] * 0.5 * b.rho * radial;
    }
    return sum;
  };
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CenteredBall>) {
          return star([&](std::size_t) { return r.r; });
        } else if constexpr (std::is_same_v<T, OffsetBall>) {
          return ball(r);
        } else if constexpr (std::is_same_v<T, RadialGraph>) {
          const SphericalTransform T(graph_grid(r));
          const auto rho = T.synthesize(T.analyze(r.rho), q, Deriv::value);
          return star([&](std::size_t k) { return rho[k]; });
        } else {
          double sum = 0.0;
          for (const auto& b : r.balls) sum += ball(b);
          return sum;
        }
      },
      region);
}

double centered_volume(const MetricField& g, double r, const SurfaceQuadrature& q) {
  double sum = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) sum += q.weights[k] * g.radial_volume(q.nodes[k], r);
  return sum;
}

}  // namespace

void validate_region(const Region& region, double h) {
  auto check_ball = [&](const OffsetBall& b) {
    require_domain(b.rho > 0.0 && std::isfinite(b.rho), "ball radius must be positive");
    if (h > 0.0) {
      const double d = norm(b.center);
      require_domain(d + h <= b.rho || d - b.rho >= h, "ball must contain the horizon or be disjoint from it");
    }
  };
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CenteredBall>) {
          require_domain(r.r > h && std::isfinite(r.r), "centered ball must enclose the horizon");
        } else if constexpr (std::is_same_v<T, OffsetBall>) {
          check_ball(r);
        } else if constexpr (std::is_same_v<T, RadialGraph>) {
          require_domain(r.n_theta >= 2, "radial graph needs n_theta >= 2");
          require_domain(r.rho.size() == static_cast<std::size_t>(2 * r.n_theta * r.n_theta),
                         "radial graph needs n_theta * 2 n_theta samples");
          for (double v : r.rho) require_domain(std::isfinite(v) && v > h, "radial graph must stay outside the horizon");
        } else {
          require_domain(!r.balls.empty(), "ball union must not be empty");
          for (const auto& b : r.balls) check_ball(b);
          for (std::size_t i = 0; i < r.balls.size(); ++i)
            for (std::size_t j = i + 1; j < r.balls.size(); ++j)
              require_domain(norm(r.balls[i].center - r.balls[j].center) >= r.balls[i].rho + r.balls[j].rho,
                             "ball union members overlap");
        }
      },
      region);
}

bool has_horizon_component(const Region& region, double h) {
  if (h <= 0.0) return false;
  if (const auto* b = std::get_if<OffsetBall>(&region)) return !contains_horizon(*b, h);
  if (const auto* u = std::get_if<BallUnion>(&region))
    return std::none_of(u->balls.begin(), u->balls.end(), [&](const OffsetBall& b) { return contains_horizon(b, h); });
  return false;
}

double min_boundary_radius(const Region& region) {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CenteredBall>) return r.r;
        else if constexpr (std::is_same_v<T, OffsetBall>) return std::abs(norm(r.center) - r.rho);
        else if constexpr (std::is_same_v<T, RadialGraph>) return *std::min_element(r.rho.begin(), r.rho.end());
        else {
          double m = std::numeric_limits<double>::infinity();
          for (const auto& b : r.balls) m = std::min(m, std::abs(norm(b.center) - b.rho));
          return m;
        }
      },
      region);
}

double max_boundary_radius(const Region& region) {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CenteredBall>) return r.r;
        else if constexpr (std::is_same_v<T, OffsetBall>) return norm(r.center) + r.rho;
        else if constexpr (std::is_same_v<T, RadialGraph>) {
          // Spectral interpolation may overshoot the samples slightly.
          return 1.05 * *std::max_element(r.rho.begin(), r.rho.end());
        } else {
          double m = 0.0;
          for (const auto& b : r.balls) m = std::max(m, norm(b.center) + b.rho);
          return m;
        }
      },
      region);
}

Measured boundary_integral(const Region& region, const MetricField& g, const SurfaceQuadrature& q,
                           const PointWeight& weight, const std::function<bool(Vec3)>& keep) {
  validate_region(region, g.horizon_radius());
  const double fine = integrate_boundary(region, g, q, weight, keep);
  const double coarse = integrate_boundary(region, g, q.coarse(), weight, keep);
  return with_coarse(fine, coarse);
}

std::vector<AreaSample> boundary_area_samples(const Region& region, const MetricField& g, const SurfaceQuadrature& q) {
  validate_region(region, g.horizon_radius());
  std::vector<AreaSample> out;
  for (const Patch& p : patches(region, q))
    for (std::size_t k = 0; k < p.X.size(); ++k)
      out.push_back({p.X[k], q.weights[k] * area_element(g, p.X[k], p.Xt[k], p.Xp[k])});
  return out;
}

Measured boundary_area(const Region& region, const MetricField& g, const SurfaceQuadrature& q,
                       const AreaOptions& opt) {
  Measured m = boundary_integral(region, g, q, {}, {});
  if (has_horizon_component(region, g.horizon_radius())) m.value += g.horizon_area();
  if (m.error > opt.rel_tol * std::abs(m.value))
    throw NumericError("boundary area not resolved: error estimate " + std::to_string(m.error) +
                       " exceeds tolerance; increase the quadrature resolution");
  return m;
}

Measured boundary_area(const Region& region, const MetricSelector& sel, const SurfaceQuadrature& q,
                       const AreaOptions& opt) {
  return boundary_area(region, *make_metric(sel), q, opt);
}

Measured region_volume(const Region& region, const MetricField& g, const SurfaceQuadrature& q) {
  const double h = g.horizon_radius();
  validate_region(region, h);
  auto ray = [&](Vec3 n, double R) { return g.radial_volume(n, R); };
  auto density = [&](Vec3 x) { return g.volume_density(x); };
  const double fine = integrate_volume(region, h, q, ray, density);
  const double coarse = integrate_volume(region, h, q.coarse(), ray, density);
  return with_coarse(fine, coarse);
}

Measured region_volume(const Region& region, const MetricSelector& sel, const SurfaceQuadrature& q) {
  return region_volume(region, *make_metric(sel), q);
}

Measured region_volume_excess(const Region& region, const PerturbedMetric& g, const SurfaceQuadrature& q) {
  const double h = g.horizon_radius();
  validate_region(region, h);
  auto ray = [&](Vec3 n, double R) { return g.radial_volume_excess(n, R); };
  auto density = [&](Vec3 x) { return g.volume_excess_density(x); };
  const double fine = integrate_volume(region, h, q, ray, density);
  const double coarse = integrate_volume(region, h, q.coarse(), ray, density);
  return with_coarse(fine, coarse);
}

double matched_radius(const MetricField& g, double V, const SurfaceQuadrature& q) {
  require_domain(V > 0.0, "matched radius needs a positive volume");
  if (const auto* s = dynamic_cast<const SchwarzschildMetric*>(&g)) return radius_for_volume(s->mass(), V);
  if (dynamic_cast<const EuclideanMetric*>(&g)) return std::cbrt(3.0 * V / (4.0 * kPi));
  std::uintmax_t iters = 200;
  if (const auto* p = dynamic_cast<const PerturbedMetric*>(&g)) {
    const MassParam m = p->spec().mass;
    const double r0 = radius_for_volume(m, V);
    if (p->spec().is_zero()) return r0;
    // Bracket around the Schwarzschild radius; the excess is a small correction.
    auto f = [&](double r) {
      double excess = 0.0;
      for (std::size_t k = 0; k < q.size(); ++k) excess += q.weights[k] * p->radial_volume_excess(q.nodes[k], r);
      return volume_to(m, r) + excess - V;
    };
    double lo = r0, hi = r0, step = 1e-3 * r0;
    double flo = f(lo), fhi = flo;
    while (flo > 0.0) {
      hi = lo;
      fhi = flo;
      lo = std::max(m.horizon_radius(), lo - step);
      step *= 2.0;
      flo = f(lo);
      if (lo <= m.horizon_radius()) break;
    }
    while (fhi < 0.0) {
      lo = hi;
      hi += step;
      step *= 2.0;
      fhi = f(hi);
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                          boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (a + b);
  }
  const double h = g.horizon_radius();
  auto f = [&](double r) { return centered_volume(g, r, q) - V; };
  double lo = std::max(h, 1e-12), hi = std::max(2.0 * lo, std::cbrt(3.0 * V / (4.0 * kPi)) + h);
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (a + b);
}

OffCenterReport off_center_classify(const Region& region, const MetricSelector& sel, double tau,
                                    const SurfaceQuadrature& q) {
  require_domain(tau > 1.0, "off-center classification needs tau > 1");
  require_domain(std::holds_alternative<SchwarzschildSelector>(sel) || std::holds_alternative<PerturbationSpec>(sel),
                 "off-center classification needs the Schwarzschild or a perturbed metric");
  const auto g = make_metric(sel);
  OffCenterReport rep;
  rep.V = region_volume(region, *g, q).value;
  require_domain(rep.V > 0.0, "region has zero volume");
  rep.r = matched_radius(*g, rep.V, q);
  rep.matched_radius_ok = rep.r >= 1.0;
  const double cut = tau * rep.r;
  const Measured outside =
      boundary_integral(region, *g, q, {}, [cut](Vec3 x) { return norm(x) > cut; });
  rep.outside_area = outside.value;
  rep.sphere_area = boundary_area(CenteredBall{rep.r}, *g, q).value;
  rep.eta = outside.value / rep.sphere_area;
  rep.eta_error = outside.error / rep.sphere_area;
  return rep;
}

std::vector<ChartPoint> to_chart(std::span<const Vec3> points, const ChartParams& chart) {
  std::vector<ChartPoint> out;
  out.reserve(points.size());
  for (const Vec3& x : points) {
    const double r = norm(x);
    require_domain(r >= chart.r * (1.0 - 1e-12), "to_chart: point inside S_r needs the interior map");
    out.push_back({chart_radius(chart, r), (1.0 / r) * x});
  }
  return out;
}

std::vector<Vec3> boundary_samples(const Region& region, const SurfaceQuadrature& q) {
  std::vector<Vec3> out;
  for (const Patch& p : patches(region, q)) out.insert(out.end(), p.X.begin(), p.X.end());
  return out;
}

Region two_ball_region(double d, double rho) {
  require_domain(d > rho && rho > 0.0, "two-ball region needs d > rho > 0");
  return BallUnion{{OffsetBall{{d, 0.0, 0.0}, rho}}};
}

RadialGraph as_radial_graph(const Region& region, int n_theta) {
  const SurfaceQuadrature q = make_surface_quadrature(n_theta);
  RadialGraph g{n_theta, std::vector<double>(q.size())};
  if (const auto* c = std::get_if<CenteredBall>(&region)) {
    std::fill(g.rho.begin(), g.rho.end(), c->r);
    return g;
  }
  const auto* b = std::get_if<OffsetBall>(&region);
  require_domain(b && norm(b->center) < b->rho, "only centered and origin-containing balls are radial graphs");
  for (std::size_t k = 0; k < q.size(); ++k) g.rho[k] = ray_exit(*b, q.nodes[k]);
  return g;
}

Region with_coordinate_ball(const Region& region, double R) {
  require_domain(R > 0.0, "coordinate ball radius must be positive");
  return std::visit(
      [&](const auto& r) -> Region {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CenteredBall>) {
          return CenteredBall{std::max(r.r, R)};
        } else if constexpr (std::is_same_v<T, RadialGraph>) {
          RadialGraph g = r;
          for (double& v : g.rho) v = std::max(v, R);
          return g;
        } else if constexpr (std::is_same_v<T, OffsetBall>) {
          return with_coordinate_ball(BallUnion{{r}}, R);
        } else {
          BallUnion u;
          bool covered = false;
          for (const auto& b : r.balls) {
            const double d = norm(b.center);
            if (d + R <= b.rho) covered = true;
            else require_domain(d - b.rho >= R, "ball meets B_R without containing it");
            u.balls.push_back(b);
          }
          if (!covered) u.balls.push_back(OffsetBall{{}, R});
          return u;
        }
      },
      region);
}

}  // namespace brayiso
