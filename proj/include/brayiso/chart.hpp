#pragma once

// Volume-preserving chart attached to a centered sphere S_r: a cone
// alpha^{-2} ds^2 + alpha s^2 g_{S^2} on s <= c glued to the Schwarzschild
// exterior written as u^{-2} ds^2 + u s^2 g_{S^2} on s >= c, together with the
// conformal factor w that turns the cone back into the Schwarzschild interior.

#include <cstddef>
#include <span>
#include <vector>

#include "brayiso/errors.hpp"
#include "brayiso/schwarzschild.hpp"

namespace brayiso {

struct ChartParams {
  MassParam m;
  double r = 0.0;      // isotropic radius of the glued sphere
  double c = 0.0;      // cone radius matching S_r
  double alpha = 0.0;  // cone aperture, in (0, 1)
  double V0 = 0.0;     // Schwarzschild volume of S_r minus cone volume 4 pi c^3 / 3
};

ChartParams chart_params(MassParam m, double r);

/// u_c(s); equals alpha on the cone s <= c.
double u_profile(const ChartParams& chart, double s);
/// du_c/ds from the closed form via dA_m/dV = H.
double u_profile_derivative(const ChartParams& chart, double s);

/// Scalar curvature 2 (1 - alpha^3) / (alpha s^2) of the cone.
double cone_scalar_curvature(double alpha, double s);

struct GapReport {
  double tau = 0.0;
  double lhs = 0.0;  // u_c(tau c) - alpha
  double rhs = 0.0;  // (1/2) (tau + 1/2)(tau - 1)^2 / tau^3 * 2m / (3c)
  bool holds = false;
  double ratio() const { return lhs / rhs; }
};

GapReport u_gap_bound(const ChartParams& chart, double tau);

enum class ProfileKind { exterior_u, interior_w };

struct RadialProfile {
  std::vector<double> grid;    // strictly increasing
  std::vector<double> values;
  std::vector<double> derivs;
  ProfileKind kind = ProfileKind::exterior_u;

  void validate() const;
  std::size_t size() const { return grid.size(); }
};

RadialProfile sample_u_profile(const ChartParams& chart, std::span<const double> grid);

/// Hawking-mass first integral y (1 - y^4 y'^2 / s^4) with y = sqrt(u s^2).
struct FirstIntegralTrace {
  std::vector<double> grid;
  std::vector<double> values;
  double median = 0.0;
  double max_deviation = 0.0;  // max |value - median|

  double relative_deviation() const;
};

FirstIntegralTrace first_integral(const RadialProfile& profile);

struct OdeControl {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double blowup_threshold = 1e6;
  double initial_step_fraction = 1e-4;  // first step as a fraction of c
  double min_step_fraction = 1e-14;     // relative to the current s
  std::size_t max_steps = 200000;
  double s_floor_fraction = 1e-12;      // stop without blow-up below this fraction of c

  OdeControl halved() const;
};

/// Step-size underflow; carries the samples accepted before the failure.
class OdeFailure : public NumericError {
 public:
  OdeFailure(const std::string& what, RadialProfile partial)
      : NumericError(what), partial_(std::move(partial)) {}
  const RadialProfile& partial() const { return partial_; }

 private:
  RadialProfile partial_;
};

struct WSolution {
  RadialProfile profile;     // interior_w samples, ascending in s, last sample at s = c
  double s0_estimate = 0.0;  // last accepted s before w crossed the blow-up threshold
  bool reached_blowup = false;
};

/// Integrates (s^2 alpha^2 w')' = (1 - alpha^3) w / (4 alpha) from s = c
/// (w = 1, w' = 0) towards s = 0 with an embedded Dormand-Prince pair.
WSolution solve_w(const ChartParams& chart, const OdeControl& ctrl = {});

/// Hawking mass of {s} x S^2 in w^4 g_m^c, for s in the sampled interior domain.
double chart_hawking_mass(const ChartParams& chart, const RadialProfile& w, double s,
                          const OdeControl& ctrl = {});

struct InnerMinimum {
  double s_min = 0.0;
  double area_min = 0.0;
  bool conclusive = false;
};

/// Minimum of A(s) = 4 pi w^4 alpha s^2 along the interior solution.
InnerMinimum inner_area_minimum(const ChartParams& chart, const RadialProfile& w,
                                const OdeControl& ctrl = {});

/// Chart coordinate of the exterior point with isotropic radius r_iso >= chart.r:
/// 4 pi s^3 / 3 + V0 = volume_to(m, r_iso).
double chart_radius(const ChartParams& chart, double r_iso);
/// ds/dr_iso = 4 pi phi^6 r^2 / (4 pi s^2).
double chart_radius_derivative(const ChartParams& chart, double r_iso);

}  // namespace brayiso
