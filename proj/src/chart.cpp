#include "brayiso/chart.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

namespace brayiso {

namespace {

constexpr double kPi = std::numbers::pi;

using WState = std::array<double, 2>;  // (w, dw/ds)

struct WSystem {
  double alpha;
  double k;  // (1 - alpha^3) / (4 alpha^3)

  void operator()(const WState& x, WState& dxds, double s) const {
    dxds[0] = x[1];
    dxds[1] = (k * x[0] - 2.0 * s * x[1]) / (s * s);
  }
};

WSystem w_system(const ChartParams& chart) {
  const double a3 = chart.alpha * chart.alpha * chart.alpha;
  return WSystem{chart.alpha, (1.0 - a3) / (4.0 * a3)};
}

auto w_stepper(const OdeControl& ctrl) {
  namespace ode = boost::numeric::odeint;
  return ode::make_controlled(ctrl.abs_tol, ctrl.rel_tol, ode::runge_kutta_dopri5<WState>());
}

// State at s, integrating from the nearest sample at or above s.
WState w_state_at(const ChartParams& chart, const RadialProfile& w, double s, const OdeControl& ctrl) {
  const auto it = std::lower_bound(w.grid.begin(), w.grid.end(), s);
  const auto k = static_cast<std::size_t>(it - w.grid.begin());
  WState x{w.values[k], w.derivs[k]};
  if (w.grid[k] == s) return x;
  const double s_from = w.grid[k];
  boost::numeric::odeint::integrate_adaptive(w_stepper(ctrl), w_system(chart), x, s_from, s,
                                             -(s_from - s) * 0.25);
  return x;
}

void require_w_profile(const RadialProfile& w) {
  w.validate();
  require_domain(w.kind == ProfileKind::interior_w, "expected an interior_w profile");
  require_domain(!w.grid.empty(), "empty w profile");
}

double area_of(const ChartParams& chart, double s, const WState& x) {
  const double w2 = x[0] * x[0];
  return 4.0 * kPi * w2 * w2 * chart.alpha * s * s;
}

}  // namespace

ChartParams chart_params(MassParam m, double r) {
  const double a = m.horizon_radius();
  require_domain(r > a, "chart_params requires r > m/2");
  const double phi = conformal_factor(m, r);
  const double q = 1.0 - a / r;
  ChartParams chart{m};
  chart.r = r;
  chart.c = r * std::cbrt(std::pow(phi, 7) / q);
  chart.alpha = std::cbrt(q * q / (phi * phi));
  chart.V0 = volume_to(m, r) - 4.0 * kPi * chart.c * chart.c * chart.c / 3.0;
  return chart;
}

double u_profile(const ChartParams& chart, double s) {
  require_domain(s > 0.0, "u_profile requires s > 0");
  if (s <= chart.c) return chart.alpha;
  const double v = 4.0 * kPi * s * s * s / 3.0;
  return profile_area(chart.m, v + chart.V0) / (4.0 * kPi * s * s);
}

double u_profile_derivative(const ChartParams& chart, double s) {
  require_domain(s > 0.0, "u_profile_derivative requires s > 0");
  if (s <= chart.c) return 0.0;
  const double v = 4.0 * kPi * s * s * s / 3.0;
  return profile_area_derivative(chart.m, v + chart.V0) - 2.0 * u_profile(chart, s) / s;
}

double cone_scalar_curvature(double alpha, double s) {
  require_domain(alpha > 0.0 && alpha < 1.0, "cone aperture must lie in (0, 1)");
  require_domain(s > 0.0, "cone_scalar_curvature requires s > 0");
  return 2.0 * (1.0 - alpha * alpha * alpha) / (alpha * s * s);
}

GapReport u_gap_bound(const ChartParams& chart, double tau) {
  require_domain(tau > 1.0, "u_gap_bound requires tau > 1");
  GapReport rep;
  rep.tau = tau;
  rep.lhs = u_profile(chart, tau * chart.c) - chart.alpha;
  const double shape = 0.5 * (tau + 0.5) * (tau - 1.0) * (tau - 1.0) / (tau * tau * tau);
  rep.rhs = shape * 2.0 * chart.m.value() / (3.0 * chart.c);
  rep.holds = rep.lhs >= rep.rhs;
  return rep;
}

void RadialProfile::validate() const {
  require_domain(values.size() == grid.size() && derivs.size() == grid.size(),
                 "profile grid, values and derivs must have equal length");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require_domain(grid[i] > grid[i - 1], "profile grid must be strictly increasing");
}

RadialProfile sample_u_profile(const ChartParams& chart, std::span<const double> grid) {
  RadialProfile p;
  p.kind = ProfileKind::exterior_u;
  p.grid.assign(grid.begin(), grid.end());
  p.values.reserve(grid.size());
  p.derivs.reserve(grid.size());
  for (double s : grid) {
    p.values.push_back(u_profile(chart, s));
    p.derivs.push_back(u_profile_derivative(chart, s));
  }
  p.validate();
  return p;
}

double FirstIntegralTrace::relative_deviation() const {
  return median == 0.0 ? max_deviation : max_deviation / std::abs(median);
}

FirstIntegralTrace first_integral(const RadialProfile& profile) {
  profile.validate();
  require_domain(!profile.grid.empty(), "first_integral requires a nonempty profile");
  require_domain(profile.kind == ProfileKind::exterior_u, "first_integral applies to exterior_u profiles");
  FirstIntegralTrace t;
  t.grid = profile.grid;
  t.values.reserve(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double s = profile.grid[i], u = profile.values[i], du = profile.derivs[i];
    require_domain(u > 0.0, "first_integral requires u > 0");
    const double su = std::sqrt(u);
    const double y = s * su;
    const double dy = su + 0.5 * s * du / su;
    const double y2 = y * y;
    const double s2 = s * s;
    t.values.push_back(y * (1.0 - y2 * y2 * dy * dy / (s2 * s2)));
  }
  std::vector<double> sorted = t.values;
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  t.median = *mid;
  if (sorted.size() % 2 == 0) {
    const double lower = *std::max_element(sorted.begin(), mid);
    t.median = 0.5 * (t.median + lower);
  }
  for (double v : t.values) t.max_deviation = std::max(t.max_deviation, std::abs(v - t.median));
  return t;
}

OdeControl OdeControl::halved() const {
  OdeControl h = *this;
  h.abs_tol *= 0.5;
  h.rel_tol *= 0.5;
  return h;
}

WSolution solve_w(const ChartParams& chart, const OdeControl& ctrl) {
  require_domain(chart.c > 0.0 && chart.alpha > 0.0 && chart.alpha <= 1.0, "invalid chart");
  require_domain(ctrl.abs_tol > 0.0 && ctrl.rel_tol > 0.0 && ctrl.blowup_threshold > 1.0,
                 "invalid ODE control");
  namespace ode = boost::numeric::odeint;
  auto stepper = w_stepper(ctrl);
  const WSystem sys = w_system(chart);

  // Collected in decreasing s, reversed at the end.
  std::vector<double> ss{chart.c}, ws{1.0}, dws{0.0};
  auto partial = [&]() {
    RadialProfile p;
    p.kind = ProfileKind::interior_w;
    p.grid.assign(ss.rbegin(), ss.rend());
    p.values.assign(ws.rbegin(), ws.rend());
    p.derivs.assign(dws.rbegin(), dws.rend());
    return p;
  };

  WSolution sol;
  WState x{1.0, 0.0};
  double s = chart.c;
  double ds = -ctrl.initial_step_fraction * chart.c;
  std::size_t steps = 0;
  while (true) {
    if (++steps > ctrl.max_steps) throw OdeFailure("solve_w exceeded the step budget", partial());
    if (s < ctrl.s_floor_fraction * chart.c) break;
    // Never step across s = 0.
    ds = std::max(ds, -0.5 * s);
    if (-ds < ctrl.min_step_fraction * s) throw OdeFailure("solve_w step size underflow", partial());
    if (stepper.try_step(sys, x, s, ds) == ode::fail) continue;
    if (x[0] > ctrl.blowup_threshold) {
      sol.s0_estimate = s;
      sol.reached_blowup = true;
      break;
    }
    ss.push_back(s);
    ws.push_back(x[0]);
    dws.push_back(x[1]);
  }
  sol.profile = partial();
  if (!sol.reached_blowup) sol.s0_estimate = s;
  return sol;
}

double chart_hawking_mass(const ChartParams& chart, const RadialProfile& w, double s, const OdeControl& ctrl) {
  require_w_profile(w);
  require_domain(s >= w.grid.front() && s <= w.grid.back(), "s outside the sampled w domain");
  const WState x = w_state_at(chart, w, s, ctrl);
  const double area = area_of(chart, s, x);
  const double dlog_area = 4.0 * x[1] / x[0] + 2.0 / s;
  const double h = dlog_area * chart.alpha / (x[0] * x[0]);
  return hawking_mass(area, h * h * area);
}

InnerMinimum inner_area_minimum(const ChartParams& chart, const RadialProfile& w, const OdeControl& ctrl) {
  require_w_profile(w);
  // dA/ds has the sign of g = 1 + 2 s w'/w.
  auto g_sample = [&](std::size_t i) { return 1.0 + 2.0 * w.grid[i] * w.derivs[i] / w.values[i]; };

  InnerMinimum res;
  std::size_t best = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double a = area_of(chart, w.grid[i], {w.values[i], w.derivs[i]});
    if (i == 0 || a < res.area_min) {
      res.area_min = a;
      best = i;
    }
  }
  res.s_min = w.grid[best];

  std::size_t k = w.size();
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (g_sample(i) < 0.0 && g_sample(i + 1) >= 0.0) k = i;
  if (k == w.size()) return res;  // minimum not bracketed by the samples

  auto g = [&](double s) {
    const WState x = w_state_at(chart, w, s, ctrl);
    return 1.0 + 2.0 * s * x[1] / x[0];
  };
  std::uintmax_t iters = 100;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      g, w.grid[k], w.grid[k + 1], g_sample(k), g_sample(k + 1),
      boost::math::tools::eps_tolerance<double>(48), iters);
  res.s_min = 0.5 * (lo + hi);
  res.area_min = area_of(chart, res.s_min, w_state_at(chart, w, res.s_min, ctrl));
  res.conclusive = true;
  return res;
}

double chart_radius(const ChartParams& chart, double r_iso) {
  require_domain(r_iso >= chart.r * (1.0 - 1e-12), "chart transfer requires r' >= r of the chart");
  const double v = std::max(volume_to(chart.m, r_iso) - chart.V0, 0.0);
  return std::cbrt(3.0 * v / (4.0 * kPi));
}

double chart_radius_derivative(const ChartParams& chart, double r_iso) {
  const double s = chart_radius(chart, r_iso);
  return volume_density(chart.m, r_iso) / (4.0 * kPi * s * s);
}

}  // namespace brayiso
