#pragma once

// Integral estimates for surfaces with quadratic area growth and for exterior
// radial volume integrals, each evaluated alongside an independent quadrature.

#include <variant>
#include <vector>

#include "brayiso/metric.hpp"
#include "brayiso/regions.hpp"
#include "brayiso/sphere_grid.hpp"

namespace brayiso {

/// The coordinate plane {x3 = 0} restricted to r0 <= |x| <= R (R may be infinite).
struct PlaneAnnulus {
  double r0 = 1.0;
  double R = std::numeric_limits<double>::infinity();
};

/// Union of centered coordinate spheres of the given radii (all >= r0 count).
struct SphereShells {
  double r0 = 1.0;
  std::vector<double> radii;
};

/// Euclidean boundary of a region, counted outside B_{r0}.
struct RegionBoundary {
  double r0 = 1.0;
  Region region;
};

using GrowthSurface = std::variant<PlaneAnnulus, SphereShells, RegionBoundary>;

double growth_cutoff(const GrowthSurface& s);

struct GrowthProfile {
  double theta = 0.0;  // smallest Theta with area(S cap B_sigma minus B_r0) <= Theta sigma^2 for all sampled sigma
  double exterior_area = 0.0;  // area of S minus B_r0
  std::vector<double> sigma;
  std::vector<double> area;
};

/// Quadratic growth constant: exact for planes and shells; for region
/// boundaries the cumulative area is sorted by |x| and bounded monotonically
/// between samples.
GrowthProfile growth_profile(const GrowthSurface& s, const SurfaceQuadrature& q);

struct BoundCheck {
  double integral = 0.0;
  double integral_error = 0.0;
  double bound = 0.0;
  double theta = 0.0;
  bool holds = false;
};

/// Integral of r^-gamma over S minus B_r0 against gamma/(gamma - 2) Theta r0^(2 - gamma).
BoundCheck coarea_bound_check(const GrowthSurface& s, double gamma, const SurfaceQuadrature& q);

/// Integral of r^-2 over S minus B_r0 against r0^-beta A^(beta/2) (2 Theta / beta)^((2 - beta)/2).
BoundCheck beta_bound_check(const GrowthSurface& s, double beta, const SurfaceQuadrature& q);

struct RadialIntegral {
  double closed_form = 0.0;
  double quadrature = 0.0;
  double quadrature_error = 0.0;
  double relative_difference() const;
};

/// Integral of r^(-6/(3 - alpha)) over R^3 minus B(0, r0):
/// 4 pi (3 - alpha) / (3 (alpha - 1)) r0^(3 (1 - alpha) / (3 - alpha)).
RadialIntegral exterior_radial_integral(double alpha, double r0);

/// Region {r0 < |x| < R}.
struct CenteredShell {
  double r0 = 1.0;
  double R = 2.0;
};
using VolumeTestRegion = std::variant<CenteredShell, Region>;

struct VolumeDiffCheck {
  double lhs = 0.0;        // |L^3_g - L^3_{g_m}| of the region outside B_r0
  double lhs_error = 0.0;
  double volume = 0.0;     // L^3_g of the same set
  double r0 = 0.0;
  double c_prime = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Pointwise constant K with |sqrt det g - phi^6| <= K / r^2 for r >= max(r_in, m/2).
double volume_density_constant(const PerturbationSpec& pert);
/// sup of 1 / sqrt det g, bounding Euclidean by g-volume.
double euclidean_volume_factor(const PerturbationSpec& pert);
/// C' = K (4 pi / 3)^((3 - alpha)/3) kappa^(alpha/3), from Hoelder with the exterior integral.
double volume_constant(const PerturbationSpec& pert, double alpha);

VolumeDiffCheck volume_diff_bound_check(const PerturbationSpec& pert, const VolumeTestRegion& region, double alpha,
                                        double r0, const SurfaceQuadrature& q);

}  // namespace brayiso
