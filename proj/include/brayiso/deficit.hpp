#pragma once

// Effective volume comparison: the exact-Schwarzschild deficit bound, the
// term-by-term refinement of Bray's chain of inequalities, and the perturbed
// comparison with an audit of its proof steps.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brayiso/metric.hpp"
#include "brayiso/regions.hpp"

namespace brayiso {

SurfaceQuadrature default_quadrature();

struct DeficitReport {
  double V = 0.0;
  double r = 0.0;
  double tau = 0.0;
  double eta = 0.0;        // measured off-center parameter
  double eta_error = 0.0;
  double eta_used = 0.0;   // min(eta, 1): the bound is stated for eta in (0, 1)
  double area_lhs = 0.0;
  double area_error = 0.0;
  double bound_rhs = 0.0;
  double margin = 0.0;
  double error = 0.0;      // numeric error attached to the margin
  bool matched_radius_ok = false;
  bool holds = false;      // margin >= -error
};

/// Checks A(boundary) >= A(S_r) + (eta m pi / 24)(1 - 1/tau)^2 r in g_m.
DeficitReport schwarzschild_deficit_check(MassParam m, const Region& region, double tau,
                                          const SurfaceQuadrature& q = default_quadrature());

struct ChainTerm {
  std::string name;
  double value = 0.0;
  double error = 0.0;
};

struct ChainStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool equality = false;
  bool holds = false;
};

struct ChainReport {
  double matched_r = 0.0;
  double chart_r = 0.0;
  double c = 0.0;
  double alpha = 0.0;
  bool horizon_component = false;
  double s_horizon = 0.0;  // chart radius of the horizon image, when present
  std::vector<ChainTerm> terms;
  std::vector<ChainStep> steps;

  bool all_hold() const;
  double term(const std::string& name) const;
};

/// Evaluates every quantity of the refined Bray chain for the boundary of the
/// region, transferred to the chart of S_{chart_r}. The default chart radius is
/// the smaller of the matched radius and the innermost boundary radius, so the
/// boundary lies in the chart exterior.
ChainReport bray_chain(MassParam m, const Region& region, const SurfaceQuadrature& q = default_quadrature(),
                       std::optional<double> chart_r = std::nullopt);

struct ThetaReport {
  double theta = 0.0;
  double area_volume_ratio = 0.0;  // A^(1/2) V^(-1/3)
  double growth = 0.0;             // sup over sigma >= 1 of A(B_sigma cap boundary) / sigma^2
  bool ratio_ok = false;
  bool growth_ok = false;
};

struct PerturbedDeficitReport {
  OffCenterReport off_center;
  double tau = 0.0;
  double eta_used = 0.0;
  double area_lhs = 0.0;
  double area_error = 0.0;
  double sphere_area = 0.0;  // A_g(S_r)
  double bound_rhs = 0.0;
  double margin = 0.0;
  double error = 0.0;
  ThetaReport theta;
  bool preconditions_ok = false;
  std::string precondition;  // first failed precondition, empty when all hold
  bool holds = false;
};

/// Checks A_g(S_r) + (eta m pi / 300)(1 - 1/tau)^2 r <= A_g(boundary) for
/// g = g_m + h. Without eta the measured value (clipped to 1) is used.
/// Violated hypotheses are reported, not thrown.
PerturbedDeficitReport perturbed_deficit_check(const PerturbationSpec& pert, const Region& region, double tau,
                                               std::optional<double> eta, double Theta,
                                               const SurfaceQuadrature& q = default_quadrature());

struct ThresholdPoint {
  double r = 0.0;
  bool holds = false;
};

/// Smallest sampled r from which the bound holds at every larger sampled r.
std::optional<double> empirical_threshold(std::span<const ThresholdPoint> points);

/// Values of the comparison steps (a)-(j) for one region. Residuals isolate
/// the perturbation h; the O(1) effect of adding B_1 is recorded in step (b).
struct TheoremStepReport {
  double r = 0.0;            // g-matched radius of Omega
  double V = 0.0;            // L^3_g(Omega)
  double A = 0.0;            // A_g(boundary of Omega)
  double eta = 0.0;
  double eta_used = 0.0;
  double tau = 0.0;
  // (a)/(b): Omega~ = Omega union B_1
  double V_tilde = 0.0;
  double A_tilde = 0.0;
  double b_volume_change = 0.0;
  double b_area_change = 0.0;
  // (c)
  double A_m_tilde = 0.0;
  double residual_c = 0.0;   // |A_gm - A_g|(Omega~) / A_g(Omega~)^(1/4)
  // (d)
  double V_m_tilde = 0.0;
  double residual_d = 0.0;   // |L_gm - L_g|(Omega~) / V^(1/2)
  // (e)
  double V_m_Sr = 0.0;
  double residual_e = 0.0;   // |L_gm - L_g|(B_r) / V^(1/2)
  // (f)
  double r_tilde = 0.0;      // g_m-matched radius of Omega~_m
  double r_tilde_g = 0.0;    // g-matched radius of Omega~
  double residual_f = 0.0;   // |r_tilde - r_tilde_g| r^(1/2)
  // (g)
  double eta_m = 0.0;        // off-center parameter of Omega~_m at (1 + tau)/2 in g_m
  bool g_off_center_ok = false;  // eta_m >= eta_used / 2
  double g_lhs = 0.0;        // A_m(L_gm(Omega~_m)) + (eta m pi / 192)(1 - 1/tau)^2 r_tilde
  double g_rhs = 0.0;        // A_gm(boundary of Omega~_m)
  bool g_holds = false;
  // (h)
  double A_gm_Sr = 0.0;
  double residual_h = 0.0;   // (A_gm(S_r) - A_m(L_gm(Omega~_m))) / V^(1/6)
  // (i)
  double A_g_Sr = 0.0;
  double i_difference = 0.0; // A_g(S_r) - A_gm(S_r)
  // (j)
  double j_slack = 0.0;      // A_g(boundary) - (eta m pi / 200)(1 - 1/tau)^2 r - A_g(S_r)
};

TheoremStepReport theorem_step_audit(const PerturbationSpec& pert, const Region& region, double tau,
                                     const SurfaceQuadrature& q = default_quadrature());

/// Horizon plus an offset ball of radius r_target centered at distance 3 r_target.
Region audit_region(double r_target);

/// C = 1 isotropic perturbation with l = 0 and l = 2 parts, supported in [1, 2 * 10^4].
PerturbationSpec audit_perturbation(MassParam m);

/// True when no consecutive ratio grows by more than the factor, up to the floor.
bool no_growth_trend(std::span<const double> values, double factor = 1.25, double floor = 1e-9);

}  // namespace brayiso
