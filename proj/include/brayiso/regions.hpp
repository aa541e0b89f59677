#pragma once

// Test regions containing the horizon ball B_{m/2}: centered balls, offset
// balls, star-shaped radial graphs and unions of disjoint balls. Boundary area
// and horizon-relative volume under any MetricField, off-center classification
// and transfer of boundary points into Bray's chart.

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "brayiso/chart.hpp"
#include "brayiso/metric.hpp"
#include "brayiso/sphere_grid.hpp"
#include "brayiso/vec3.hpp"

namespace brayiso {

struct CenteredBall {
  double r = 0.0;
};

struct OffsetBall {
  Vec3 center;
  double rho = 0.0;
};

/// Star-shaped region {t n : t < rho(n)} sampled on make_surface_quadrature(n_theta).
struct RadialGraph {
  int n_theta = 0;
  std::vector<double> rho;
};

struct BallUnion {
  std::vector<OffsetBall> balls;
};

using Region = std::variant<CenteredBall, OffsetBall, RadialGraph, BallUnion>;

/// A region is always united with the horizon ball of radius h. Throws
/// std::domain_error when a ball straddles the horizon sphere, union members
/// overlap, or a graph dips to the horizon.
void validate_region(const Region& region, double h);
/// True when no part of the region contains the horizon ball, so that the
/// horizon sphere is itself a boundary component.
bool has_horizon_component(const Region& region, double h);
/// Smallest and largest |x| over the non-horizon boundary.
double min_boundary_radius(const Region& region);
double max_boundary_radius(const Region& region);

struct Measured {
  double value = 0.0;
  double error = 0.0;  // |fine - coarse| plus a relative floor of 1e-12
};

struct AreaOptions {
  /// Relative error estimate above which boundary_area throws NumericError.
  double rel_tol = 1e-6;
};

Measured boundary_area(const Region& region, const MetricField& g, const SurfaceQuadrature& q,
                       const AreaOptions& opt = {});
Measured boundary_area(const Region& region, const MetricSelector& sel, const SurfaceQuadrature& q,
                       const AreaOptions& opt = {});

/// Integral of weight(x) dA_g over the non-horizon boundary, restricted to
/// nodes with keep(x) when a mask is given. No tolerance check.
using PointWeight = std::function<double(Vec3)>;
Measured boundary_integral(const Region& region, const MetricField& g, const SurfaceQuadrature& q,
                           const PointWeight& weight, const std::function<bool(Vec3)>& keep = {});

struct AreaSample {
  Vec3 x;
  double dA = 0.0;  // quadrature weight times area element
};
/// Per-node area contributions of the non-horizon boundary.
std::vector<AreaSample> boundary_area_samples(const Region& region, const MetricField& g, const SurfaceQuadrature& q);

Measured region_volume(const Region& region, const MetricField& g, const SurfaceQuadrature& q);
Measured region_volume(const Region& region, const MetricSelector& sel, const SurfaceQuadrature& q);

/// L^3_pert(Omega) - L^3_{g_m}(Omega) from the pointwise density difference.
Measured region_volume_excess(const Region& region, const PerturbedMetric& g, const SurfaceQuadrature& q);

struct OffCenterReport {
  double V = 0.0;
  double r = 0.0;
  double eta = 0.0;
  double eta_error = 0.0;
  double outside_area = 0.0;  // area of the boundary outside B_{tau r}
  double sphere_area = 0.0;   // area of S_r in the same metric
  bool matched_radius_ok = false;  // clause r >= 1 of the definition
};

/// Off-center parameter eta of the region under g (volume-matched centered
/// sphere S_r, boundary nodes with |x| > tau r). Requires a metric whose
/// centered spheres have closed-form volume: Schwarzschild or perturbed.
OffCenterReport off_center_classify(const Region& region, const MetricSelector& sel, double tau,
                                    const SurfaceQuadrature& q);

/// Centered radius whose g-volume equals V (bracketed root of the centered ball volume).
double matched_radius(const MetricField& g, double V, const SurfaceQuadrature& q);

struct ChartPoint {
  double s = 0.0;
  Vec3 direction;  // unit vector, angles preserved
};

std::vector<ChartPoint> to_chart(std::span<const Vec3> points, const ChartParams& chart);

/// Boundary nodes of the region on q (horizon excluded).
std::vector<Vec3> boundary_samples(const Region& region, const SurfaceQuadrature& q);

/// Horizon plus an offset ball of radius rho at distance d along +x.
Region two_ball_region(double d, double rho);
/// Omega union B_R: balls disjoint from B_R are kept, graphs are clipped to rho >= R.
Region with_coordinate_ball(const Region& region, double R);

/// Graph samples of a region on its own grid (centered or origin-containing offset ball).
RadialGraph as_radial_graph(const Region& region, int n_theta);

}  // namespace brayiso
