#pragma once

// Volume-constrained area minimization over star-shaped radial graphs.

#include <cstdint>
#include <optional>
#include <vector>

#include "brayiso/metric.hpp"
#include "brayiso/regions.hpp"
#include "brayiso/schwarzschild.hpp"

namespace brayiso {

/// Radial graph {rho(n) n} sampled on make_surface_quadrature(n_theta).
struct GraphSurface {
  int n_theta = 0;
  std::vector<double> rho;

  /// Throws std::domain_error when rho <= h somewhere, the sample count does
  /// not match the grid, or max |grad rho| / rho exceeds slope_cap.
  void validate(double h, double slope_cap = 10.0) const;
  RadialGraph region() const { return {n_theta, rho}; }
};

GraphSurface sphere_surface(int n_theta, double r);
/// rho = r (1 + eps P_2(cos theta)).
GraphSurface ellipsoidal_surface(int n_theta, double r, double eps);
/// rho = r (1 + amplitude * sum of random unit-bounded modes with 1 <= l <= l_max).
GraphSurface random_surface(int n_theta, double r, double amplitude, int l_max, std::uint64_t seed);

struct OptimizerConfig {
  double step_size = 1.0;    // initial trial step of the backtracking search
  double volume_tol = 1e-12; // relative
  double grad_tol = 1e-6;    // max relative discrete CMC residual
  int max_iters = 500;
  std::uint64_t seed = 0;    // used by random_surface callers
  int history = 8;           // quasi-Newton memory

  void validate() const;
};

struct AreaGradient {
  double area = 0.0;
  std::vector<double> gradient;  // d area / d rho at each node
};

AreaGradient area_and_gradient(const GraphSurface& s, const MetricField& g);
AreaGradient area_and_gradient(const GraphSurface& s, const MetricSelector& sel);

/// Horizon-relative volume enclosed by the graph and its node gradient.
double graph_volume(const GraphSurface& s, const MetricField& g);
std::vector<double> graph_volume_gradient(const GraphSurface& s, const MetricField& g);

/// Uniform scaling rho -> lambda rho with graph_volume = target_V.
GraphSurface project_volume(const GraphSurface& s, const MetricField& g, double target_V, double volume_tol = 1e-12);
GraphSurface project_volume(const GraphSurface& s, MassParam m, double target_V, double volume_tol = 1e-12);

struct CurvatureField {
  std::vector<double> H;
  double mean = 0.0;       // area-weighted
  double deviation = 0.0;  // max |H - mean| / mean
  bool geometric = false;  // false when taken from the first variation (non-conformal metrics)
};

/// Mean curvature of the graph from its second fundamental form. Conformally
/// flat metrics use H_g = psi^-2 (H_delta + 4 nu . grad log psi); other metrics
/// fall back to the ratio of area and volume first variations.
CurvatureField mean_curvature(const GraphSurface& s, const MetricField& g);

struct MinimizeReport {
  GraphSurface surface;
  int iterations = 0;
  double area = 0.0;
  double volume = 0.0;
  double target_volume = 0.0;
  double matched_r = 0.0;
  double mean_H = 0.0;
  double cmc_deviation = 0.0;
  double centering = 0.0;      // sup |rho - r| / r
  double stationarity = 0.0;   // max relative discrete CMC residual
  std::optional<double> profile_area;  // exact Schwarzschild only
  std::vector<double> area_history;
  bool converged = false;
};

/// Quasi-Newton projected descent: the volume constraint is restored by
/// project_volume after every trial step, and the step length comes from
/// Armijo backtracking. Defaults to the Schwarzschild metric of mass m.
MinimizeReport minimize(const GraphSurface& initial, MassParam m, double target_V, const OptimizerConfig& cfg,
                        const std::optional<MetricSelector>& metric = std::nullopt);

}  // namespace brayiso
