#include "brayiso/deficit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "brayiso/errors.hpp"
#include "brayiso/schwarzschild.hpp"

namespace brayiso {

namespace {

constexpr double kPi = std::numbers::pi;

double off_center_factor(double tau) {
  const double t = 1.0 - 1.0 / tau;
  return t * t;
}

double clip_eta(double eta) { return std::clamp(eta, 0.0, 1.0); }

ChainStep inequality(std::string name, double lhs, double rhs, double tol) {
  return {std::move(name), lhs, rhs, tol, false, lhs >= rhs - tol};
}

ChainStep equality(std::string name, double lhs, double rhs, double tol) {
  return {std::move(name), lhs, rhs, tol, true, std::abs(lhs - rhs) <= tol};
}

}  // namespace

SurfaceQuadrature default_quadrature() { return make_surface_quadrature(64); }

DeficitReport schwarzschild_deficit_check(MassParam m, const Region& region, double tau, const SurfaceQuadrature& q) {
  require_domain(tau > 1.0, "deficit check needs tau > 1");
  validate_region(region, m.horizon_radius());
  const SchwarzschildSelector sel{m};
  const OffCenterReport oc = off_center_classify(region, sel, tau, q);
  const Measured area = boundary_area(region, sel, q);

  DeficitReport rep;
  rep.V = oc.V;
  rep.r = oc.r;
  rep.tau = tau;
  rep.eta = oc.eta;
  rep.eta_error = oc.eta_error;
  rep.eta_used = clip_eta(oc.eta);
  rep.matched_radius_ok = oc.matched_radius_ok;
  rep.area_lhs = area.value;
  rep.area_error = area.error;
  rep.bound_rhs = sphere_area(m, rep.r) + rep.eta_used * m.value() * kPi / 24.0 * off_center_factor(tau) * rep.r;
  rep.margin = rep.area_lhs - rep.bound_rhs;
  rep.error = area.error + oc.eta_error * m.value() * kPi / 24.0 * off_center_factor(tau) * rep.r +
              1e-12 * rep.area_lhs;
  rep.holds = rep.margin >= -rep.error;
  return rep;
}

bool ChainReport::all_hold() const {
  return std::all_of(steps.begin(), steps.end(), [](const ChainStep& s) { return s.holds; });
}

double ChainReport::term(const std::string& name) const {
  for (const ChainTerm& t : terms)
    if (t.name == name) return t.value;
  throw std::out_of_range("no chain term " + name);
}

ChainReport bray_chain(MassParam m, const Region& region, const SurfaceQuadrature& q, std::optional<double> chart_r) {
  const double h = m.horizon_radius();
  validate_region(region, h);
  const SchwarzschildMetric gm(m);

  ChainReport rep;
  rep.matched_r = radius_for_volume(m, region_volume(region, gm, q).value);
  // Interpolated graphs can dip below their samples, so the nodes actually used count too.
  double inner = min_boundary_radius(region);
  for (const SurfaceQuadrature& grid : {q, q.coarse()})
    for (const Vec3& x : boundary_samples(region, grid)) inner = std::min(inner, norm(x));
  rep.chart_r = chart_r.value_or(std::min(rep.matched_r, inner));
  require_domain(rep.chart_r > h, "chart radius must lie outside the horizon");
  require_domain(inner >= rep.chart_r * (1.0 - 1e-12), "boundary must lie outside the chart sphere");

  const ChartParams chart = chart_params(m, rep.chart_r);
  rep.c = chart.c;
  rep.alpha = chart.alpha;
  rep.horizon_component = has_horizon_component(region, h);
  std::optional<RadialProfile> w;
  if (rep.horizon_component) w = solve_w(chart).profile;
  const ChartMetric gmc(chart, ChartMetric::Frame::gmc, w);
  const ChartMetric flat(chart, ChartMetric::Frame::flat, w);
  if (rep.horizon_component) rep.s_horizon = gmc.horizon_chart_radius();

  const double a = chart.alpha;
  const double sh2 = 4.0 * kPi * rep.s_horizon * rep.s_horizon;
  auto u = [&](Vec3 x) { return gmc.u_at(x); };
  auto gap = [&](Vec3 x) { return gmc.u_at(x) - a; };

  // Horizon component: A_gm = 16 pi m^2, A_gmc = alpha 4 pi s_h^2, A_delta = 4 pi s_h^2, u = alpha.
  const Measured A_gm = boundary_area(region, gm, q);
  Measured A_gmc = boundary_integral(region, gmc, q, {});
  Measured A_delta = boundary_integral(region, flat, q, {});
  Measured int_u = boundary_integral(region, flat, q, u);
  const Measured gap_delta = boundary_integral(region, flat, q, gap);
  const Measured gap_gmc = boundary_integral(region, gmc, q, gap);
  if (rep.horizon_component) {
    A_gmc.value += a * sh2;
    A_delta.value += sh2;
    int_u.value += a * sh2;
  }
  const double sphere = 4.0 * kPi * chart.c * chart.c;
  const double A_gm_Sr = sphere_area(m, rep.chart_r);

  rep.terms = {
      {"A_gm", A_gm.value, A_gm.error},
      {"A_gmc", A_gmc.value, A_gmc.error},
      {"int_u_dAdelta", int_u.value, int_u.error},
      {"int_ugap_plus_alphaAdelta", gap_delta.value + a * A_delta.value, gap_delta.error + a * A_delta.error},
      {"alpha_Adelta_sphere", a * sphere, 0.0},
      {"A_gm_Sr", A_gm_Sr, 0.0},
      {"gap_term", gap_delta.value, gap_delta.error},
      {"A_delta", A_delta.value, A_delta.error},
      {"weighted_gap_gmc", a * a * gap_gmc.value, a * a * gap_gmc.error},
  };

  const double floor = 1e-10 * A_gm.value;
  rep.steps = {
      inequality("A_gm >= A_gmc", A_gm.value, A_gmc.value, A_gm.error + A_gmc.error + floor),
      inequality("A_gmc >= int u dA_delta", A_gmc.value, int_u.value, A_gmc.error + int_u.error + floor),
      equality("int u dA_delta = int (u - alpha) dA_delta + alpha A_delta", int_u.value,
               gap_delta.value + a * A_delta.value, int_u.error + gap_delta.error + a * A_delta.error + floor),
      inequality("A_delta >= 4 pi c^2", A_delta.value, sphere, A_delta.error + floor),
      equality("alpha 4 pi c^2 = A_gm(S_r)", a * sphere, A_gm_Sr, floor),
      inequality("int (u - alpha) dA_delta >= alpha^2 int (u - alpha) dA_gmc", gap_delta.value,
                 a * a * gap_gmc.value, gap_delta.error + gap_gmc.error + floor),
  };
  return rep;
}

namespace {

ThetaReport theta_report(const Region& region, const MetricField& g, const SurfaceQuadrature& q, double A, double V,
                         double Theta) {
  ThetaReport t;
  t.theta = Theta;
  t.area_volume_ratio = std::sqrt(A) / std::cbrt(V);
  std::vector<AreaSample> samples = boundary_area_samples(region, g, q);
  const double h = g.horizon_radius();
  if (has_horizon_component(region, h)) samples.push_back({{h, 0.0, 0.0}, g.horizon_area()});
  std::sort(samples.begin(), samples.end(),
            [](const AreaSample& a, const AreaSample& b) { return norm(a.x) < norm(b.x); });
  // The discrete measure attains its sup at sigma = 1 or at a sample radius.
  double cum = 0.0, best = 0.0;
  std::size_t k = 0;
  while (k < samples.size() && norm(samples[k].x) <= 1.0) cum += samples[k++].dA;
  best = cum;
  for (; k < samples.size(); ++k) {
    cum += samples[k].dA;
    const double s = norm(samples[k].x);
    best = std::max(best, cum / (s * s));
  }
  t.growth = best;
  t.ratio_ok = t.area_volume_ratio <= Theta;
  t.growth_ok = t.growth <= Theta;
  return t;
}

}  // namespace

PerturbedDeficitReport perturbed_deficit_check(const PerturbationSpec& pert, const Region& region, double tau,
                                               std::optional<double> eta, double Theta, const SurfaceQuadrature& q) {
  require_domain(tau > 1.0, "deficit check needs tau > 1");
  require_domain(Theta > 0.0, "Theta must be positive");
  pert.validate();
  const MassParam m = pert.mass;
  validate_region(region, m.horizon_radius());
  const PerturbedMetric g(pert);

  PerturbedDeficitReport rep;
  rep.tau = tau;
  rep.off_center = off_center_classify(region, pert, tau, q);
  const Measured area = boundary_area(region, g, q);
  rep.area_lhs = area.value;
  rep.area_error = area.error;
  rep.sphere_area = rep.off_center.sphere_area;
  rep.theta = theta_report(region, g, q, area.value, rep.off_center.V, Theta);

  if (eta) {
    require_domain(*eta > 0.0 && *eta < 1.0, "eta must lie in (0, 1)");
    rep.eta_used = *eta;
  } else {
    rep.eta_used = clip_eta(rep.off_center.eta);
  }

  if (!rep.off_center.matched_radius_ok)
    rep.precondition = "matched radius below 1";
  else if (eta && rep.off_center.eta + rep.off_center.eta_error < *eta)
    rep.precondition = "region is not eta-off-center";
  else if (!rep.theta.ratio_ok)
    rep.precondition = "A^(1/2) V^(-1/3) exceeds Theta";
  else if (!rep.theta.growth_ok)
    rep.precondition = "boundary area growth exceeds Theta";
  rep.preconditions_ok = rep.precondition.empty();

  const double slope = m.value() * kPi / 300.0 * off_center_factor(tau) * rep.off_center.r;
  rep.bound_rhs = rep.sphere_area + rep.eta_used * slope;
  rep.margin = rep.area_lhs - rep.bound_rhs;
  rep.error = area.error + (eta ? 0.0 : rep.off_center.eta_error * slope) + 1e-12 * rep.area_lhs;
  rep.holds = rep.margin >= -rep.error;
  return rep;
}

std::optional<double> empirical_threshold(std::span<const ThresholdPoint> points) {
  std::vector<ThresholdPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const ThresholdPoint& a, const ThresholdPoint& b) { return a.r < b.r; });
  std::optional<double> threshold;
  for (auto it = sorted.rbegin(); it != sorted.rend() && it->holds; ++it) threshold = it->r;
  return threshold;
}

TheoremStepReport theorem_step_audit(const PerturbationSpec& pert, const Region& region, double tau,
                                     const SurfaceQuadrature& q) {
  require_domain(tau > 1.0, "audit needs tau > 1");
  pert.validate();
  const MassParam m = pert.mass;
  validate_region(region, m.horizon_radius());
  const PerturbedMetric g(pert);
  const SchwarzschildMetric gm(m);
  const double R = pert.inner_cutoff;
  const Region tilde = with_coordinate_ball(region, R);

  TheoremStepReport rep;
  rep.tau = tau;
  const double Vm = region_volume(region, gm, q).value;
  rep.V = Vm + region_volume_excess(region, g, q).value;
  rep.r = matched_radius(g, rep.V, q);
  rep.A = boundary_area(region, g, q).value;
  const OffCenterReport oc = off_center_classify(region, pert, tau, q);
  rep.eta = oc.eta;
  rep.eta_used = clip_eta(oc.eta);

  // (a), (b)
  rep.V_m_tilde = region_volume(tilde, gm, q).value;
  rep.V_tilde = rep.V_m_tilde + region_volume_excess(tilde, g, q).value;
  rep.A_tilde = boundary_area(tilde, g, q).value;
  rep.b_volume_change = rep.V_tilde - rep.V;
  rep.b_area_change = rep.A_tilde - rep.A;

  // (c), (d)
  rep.A_m_tilde = boundary_area(tilde, gm, q).value;
  rep.residual_c = std::abs(rep.A_m_tilde - rep.A_tilde) / std::pow(rep.A_tilde, 0.25);
  rep.residual_d = std::abs(rep.V_m_tilde - rep.V_tilde) / std::sqrt(rep.V);

  // (e): L_gm(B_r) - L_g(B_r) is minus the excess of the centered ball.
  rep.V_m_Sr = volume_to(m, rep.r);
  rep.residual_e = std::abs(region_volume_excess(CenteredBall{rep.r}, g, q).value) / std::sqrt(rep.V);

  // (f)
  rep.r_tilde = radius_for_volume(m, rep.V_m_tilde);
  rep.r_tilde_g = matched_radius(g, rep.V_tilde, q);
  rep.residual_f = std::abs(rep.r_tilde - rep.r_tilde_g) * std::sqrt(rep.r);

  // (g): exact Schwarzschild comparison for Omega~_m at tau' = (1 + tau) / 2.
  const double tau_m = 0.5 * (1.0 + tau);
  const OffCenterReport oc_m = off_center_classify(tilde, SchwarzschildSelector{m}, tau_m, q);
  rep.eta_m = oc_m.eta;
  rep.g_off_center_ok = oc_m.eta + oc_m.eta_error >= 0.5 * rep.eta_used;
  rep.g_lhs = profile_area(m, rep.V_m_tilde) +
              rep.eta_used * m.value() * kPi / 192.0 * off_center_factor(tau) * rep.r_tilde;
  rep.g_rhs = rep.A_m_tilde;
  rep.g_holds = rep.g_lhs <= rep.g_rhs * (1.0 + 1e-10);

  // (h), (i), (j)
  rep.A_gm_Sr = sphere_area(m, rep.r);
  rep.residual_h = (rep.A_gm_Sr - profile_area(m, rep.V_m_tilde)) / std::pow(rep.V, 1.0 / 6.0);
  rep.A_g_Sr = oc.sphere_area;
  rep.i_difference = rep.A_g_Sr - rep.A_gm_Sr;
  rep.j_slack = rep.A - rep.eta_used * m.value() * kPi / 200.0 * off_center_factor(tau) * rep.r - rep.A_g_Sr;
  return rep;
}

Region audit_region(double r_target) {
  require_domain(r_target > 0.0, "audit region needs a positive radius");
  return two_ball_region(3.0 * r_target, r_target);
}

PerturbationSpec audit_perturbation(MassParam m) {
  PerturbationSpec p;
  p.mass = m;
  p.amplitude = 1.0;
  p.modes = {{0, 0, 0.5}, {2, 0, 0.5}};
  p.kind = PerturbationSpec::Tensor::isotropic;
  p.inner_cutoff = 1.0;
  p.outer_cutoff = 1e4;
  return p;
}

bool no_growth_trend(std::span<const double> values, double factor, double floor) {
  for (std::size_t k = 1; k < values.size(); ++k)
    if (std::abs(values[k]) > factor * std::abs(values[k - 1]) + floor) return false;
  return true;
}

}  // namespace brayiso
