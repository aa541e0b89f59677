#include "brayiso/decay.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "brayiso/errors.hpp"
#include "brayiso/quadrature.hpp"

namespace brayiso {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate_surface(const GrowthSurface& s) {
  std::visit(Overloaded{
                 [](const PlaneAnnulus& p) {
                   require_domain(p.r0 >= 1.0, "growth cutoff r0 must be >= 1");
                   require_domain(p.R > p.r0, "plane annulus needs R > r0");
                 },
                 [](const SphereShells& s) {
                   require_domain(s.r0 >= 1.0, "growth cutoff r0 must be >= 1");
                   for (double r : s.radii) require_domain(r > 0.0, "shell radii must be positive");
                 },
                 [](const RegionBoundary& b) {
                   require_domain(b.r0 >= 1.0, "growth cutoff r0 must be >= 1");
                   validate_region(b.region, 0.0);
                 },
             },
             s);
}

// Integral of f(r) = r^-gamma over the surface outside B_r0, with error.
Measured power_integral(const GrowthSurface& s, double gamma, const SurfaceQuadrature& q) {
  return std::visit(
      Overloaded{
          [&](const PlaneAnnulus& p) -> Measured {
            auto f = [gamma](double r) { return 2.0 * kPi * std::pow(r, 1.0 - gamma); };
            const IntegralResult res = std::isfinite(p.R) ? integrate_adaptive(f, p.r0, p.R)
                                                          : integrate_to_infinity(f, p.r0);
            return {res.value, res.error};
          },
          [&](const SphereShells& sh) -> Measured {
            double sum = 0.0;
            for (double r : sh.radii)
              if (r > sh.r0) sum += 4.0 * kPi * std::pow(r, 2.0 - gamma);
            return {sum, 0.0};
          },
          [&](const RegionBoundary& b) -> Measured {
            const EuclideanMetric flat;
            return boundary_integral(
                b.region, flat, q, [gamma](Vec3 x) { return std::pow(norm(x), -gamma); },
                [r0 = b.r0](Vec3 x) { return norm(x) > r0; });
          },
      },
      s);
}

}  // namespace

double growth_cutoff(const GrowthSurface& s) {
  return std::visit([](const auto& v) { return v.r0; }, s);
}

GrowthProfile growth_profile(const GrowthSurface& s, const SurfaceQuadrature& q) {
  validate_surface(s);
  GrowthProfile g;
  std::visit(Overloaded{
                 [&](const PlaneAnnulus& p) {
                   g.theta = std::isfinite(p.R) ? kPi * (1.0 - p.r0 * p.r0 / (p.R * p.R)) : kPi;
                   g.exterior_area = std::isfinite(p.R) ? kPi * (p.R * p.R - p.r0 * p.r0)
                                                        : std::numeric_limits<double>::infinity();
                 },
                 [&](const SphereShells& sh) {
                   std::vector<double> radii;
                   for (double r : sh.radii)
                     if (r > sh.r0) radii.push_back(r);
                   std::sort(radii.begin(), radii.end());
                   double cum = 0.0;
                   for (double r : radii) {
                     cum += 4.0 * kPi * r * r;
                     g.sigma.push_back(r);
                     g.area.push_back(cum);
                     g.theta = std::max(g.theta, cum / (r * r));
                   }
                   g.exterior_area = cum;
                 },
                 [&](const RegionBoundary& b) {
                   const EuclideanMetric flat;
                   auto samples = boundary_area_samples(b.region, flat, q);
                   std::erase_if(samples, [&](const AreaSample& a) { return norm(a.x) <= b.r0; });
                   std::sort(samples.begin(), samples.end(),
                             [](const AreaSample& a, const AreaSample& c) { return norm(a.x) < norm(c.x); });
                   double cum = 0.0;
                   for (const auto& a : samples) {
                     cum += a.dA;
                     const double r = norm(a.x);
                     g.theta = std::max(g.theta, cum / (r * r));
                   }
                   // Keep a compact record: the cumulative area at a doubling grid.
                   for (double sigma = b.r0; !samples.empty(); sigma *= 2.0) {
                     double a = 0.0;
                     for (const auto& smp : samples)
                       if (norm(smp.x) <= sigma) a += smp.dA;
                     g.sigma.push_back(sigma);
                     g.area.push_back(a);
                     if (a >= cum) break;
                   }
                   g.exterior_area = cum;
                 },
             },
             s);
  return g;
}

BoundCheck coarea_bound_check(const GrowthSurface& s, double gamma, const SurfaceQuadrature& q) {
  require_domain(gamma > 2.0, "co-area bound needs gamma > 2");
  const GrowthProfile g = growth_profile(s, q);
  const double r0 = growth_cutoff(s);
  const Measured integral = power_integral(s, gamma, q);
  BoundCheck c;
  c.integral = integral.value;
  c.integral_error = integral.error;
  c.theta = g.theta;
  c.bound = gamma / (gamma - 2.0) * g.theta * std::pow(r0, 2.0 - gamma);
  c.holds = c.integral <= c.bound + c.integral_error;
  return c;
}

BoundCheck beta_bound_check(const GrowthSurface& s, double beta, const SurfaceQuadrature& q) {
  require_domain(beta > 0.0 && beta < 2.0, "beta must lie in (0, 2)");
  const GrowthProfile g = growth_profile(s, q);
  require_domain(std::isfinite(g.exterior_area), "beta bound needs a surface of finite area");
  const double r0 = growth_cutoff(s);
  const Measured integral = power_integral(s, 2.0, q);
  BoundCheck c;
  c.integral = integral.value;
  c.integral_error = integral.error;
  c.theta = g.theta;
  c.bound = std::pow(r0, -beta) * std::pow(g.exterior_area, 0.5 * beta) *
            std::pow(2.0 * g.theta / beta, 0.5 * (2.0 - beta));
  c.holds = c.integral <= c.bound + c.integral_error;
  return c;
}

double RadialIntegral::relative_difference() const {
  return std::abs(quadrature - closed_form) / std::abs(closed_form);
}

RadialIntegral exterior_radial_integral(double alpha, double r0) {
  require_domain(alpha > 1.0 && alpha < 3.0, "alpha must lie in (1, 3)");
  require_domain(r0 >= 1.0, "r0 must be >= 1");
  RadialIntegral res;
  res.closed_form = 4.0 * kPi * (3.0 - alpha) / (3.0 * (alpha - 1.0)) *
                    std::pow(r0, 3.0 * (1.0 - alpha) / (3.0 - alpha));
  // 4 pi int r^(-6/(3-alpha)) r^2 dr, written in t = log(r / r0).
  const double p = 3.0 - 6.0 / (3.0 - alpha);
  const double log_r0 = std::log(r0);
  const IntegralResult q = integrate_to_infinity(
      [&](double t) { return 4.0 * kPi * std::exp(p * (t + log_r0)); }, 0.0, QuadratureSpec{.abs_tol = 1e-14});
  res.quadrature = q.value;
  res.quadrature_error = q.error;
  return res;
}

double volume_density_constant(const PerturbationSpec& pert) {
  pert.validate();
  double c_eff = 0.0;
  for (const auto& mode : pert.modes) c_eff += std::abs(mode.coeff);
  c_eff *= std::abs(pert.amplitude);
  const double phi = conformal_factor(pert.mass, std::max(pert.inner_cutoff, pert.mass.horizon_radius()));
  if (pert.kind == PerturbationSpec::Tensor::radial) return c_eff * phi * phi;
  return 1.5 * c_eff * std::sqrt(std::pow(phi, 4) + c_eff * pert.profile_sup());
}

double euclidean_volume_factor(const PerturbationSpec& pert) {
  double c_eff = 0.0;
  for (const auto& mode : pert.modes) c_eff += std::abs(mode.coeff);
  c_eff *= std::abs(pert.amplitude);
  const double floor = 1.0 - c_eff * pert.profile_sup();
  require_domain(floor > 0.0, "perturbation too large");
  return pert.kind == PerturbationSpec::Tensor::radial ? std::pow(floor, -0.5) : std::pow(floor, -1.5);
}

double volume_constant(const PerturbationSpec& pert, double alpha) {
  require_domain(alpha > 1.0 && alpha < 3.0, "alpha must lie in (1, 3)");
  return volume_density_constant(pert) * std::pow(4.0 * kPi / 3.0, (3.0 - alpha) / 3.0) *
         std::pow(euclidean_volume_factor(pert), alpha / 3.0);
}

VolumeDiffCheck volume_diff_bound_check(const PerturbationSpec& pert, const VolumeTestRegion& region, double alpha,
                                        double r0, const SurfaceQuadrature& q) {
  require_domain(alpha > 1.0 && alpha < 3.0, "alpha must lie in (1, 3)");
  require_domain(r0 >= 1.0, "r0 must be >= 1");
  const PerturbedMetric g(pert);
  VolumeDiffCheck c;
  c.r0 = r0;
  std::visit(Overloaded{
                 [&](const CenteredShell& sh) {
                   require_domain(sh.R > sh.r0 && sh.r0 >= g.horizon_radius(), "shell needs m/2 <= r0 < R");
                   const double lo = std::max(sh.r0, r0);
                   auto shell = [&](const SurfaceQuadrature& grid, bool excess) {
                     double sum = 0.0;
                     for (std::size_t k = 0; k < grid.size(); ++k) {
                       const Vec3 n = grid.nodes[k];
                       sum += grid.weights[k] * (excess ? g.radial_volume_excess(n, sh.R) - g.radial_volume_excess(n, lo)
                                                        : g.radial_volume(n, sh.R) - g.radial_volume(n, lo));
                     }
                     return sum;
                   };
                   const double fine = shell(q, true), coarse = shell(q.coarse(), true);
                   c.lhs = std::abs(fine);
                   c.lhs_error = std::abs(fine - coarse) + 1e-12 * c.lhs;
                   c.volume = shell(q, false);
                 },
                 [&](const Region& reg) {
                   const auto* u = std::get_if<BallUnion>(&reg);
                   const auto* b = std::get_if<OffsetBall>(&reg);
                   require_domain(u || b, "volume comparison region must be a ball or a union of balls");
                   const std::vector<OffsetBall> balls = u ? u->balls : std::vector<OffsetBall>{*b};
                   for (const auto& ball : balls)
                     require_domain(norm(ball.center) - ball.rho >= r0, "region must lie outside B_r0");
                   const Measured ex = region_volume_excess(reg, g, q);
                   c.lhs = std::abs(ex.value);
                   c.lhs_error = ex.error;
                   c.volume = region_volume(reg, g, q).value;
                 },
             },
             region);
  c.c_prime = volume_constant(pert, alpha);
  c.rhs = c.c_prime * std::pow((3.0 - alpha) / (alpha - 1.0), (3.0 - alpha) / 3.0) * std::pow(c.volume, alpha / 3.0) *
          std::pow(r0, 1.0 - alpha);
  c.holds = c.lhs <= c.rhs + c.lhs_error;
  return c;
}

}  // namespace brayiso
