#include "brayiso/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "brayiso/json_io.hpp"
#include "brayiso/parallel.hpp"

namespace brayiso {

namespace {

constexpr double kPi = std::numbers::pi;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json settings_of(const RunConfig& c) {
  const SurfaceQuadrature q = make_surface_quadrature(c.n_theta);
  return Json{{"mass", c.mass},
              {"tau", c.tau},
              {"n_theta", q.n_theta},
              {"n_phi", q.n_phi},
              {"graph_n_theta", c.graph_n_theta},
              {"area_rel_tol", AreaOptions{}.rel_tol},
              {"ode_abs_tol", c.ode_tol},
              {"ode_rel_tol", c.ode_tol},
              {"grad_tol", c.grad_tol},
              {"volume_tol", c.volume_tol},
              {"seed", c.seed}};
}

OdeControl ode_of(const RunConfig& c) {
  OdeControl o;
  o.abs_tol = o.rel_tol = c.ode_tol;
  return o;
}

double radius_of(const RunConfig& c, MassParam m) {
  if (c.radius) return *c.radius;
  if (c.volume) return radius_for_volume(m, *c.volume);
  throw UsageError("--radius or --volume is required");
}

Region region_of(const RunConfig& c) {
  int chosen = !c.region_file.empty() + c.centered.has_value() + c.shift.has_value() + c.offset.has_value();
  if (chosen != 1) throw UsageError("choose exactly one of --region, --centered, --shift, --offset");
  if (!c.region_file.empty()) {
    try {
      return region_from_json(read_json_file(c.region_file));
    } catch (const InputError& e) {
      const std::string what = e.what();
      throw UsageError(what.rfind(c.region_file, 0) == 0 ? what : c.region_file + ": " + what);
    }
  }
  if (c.centered) return CenteredBall{*c.centered};
  if (!c.rho) throw UsageError("--rho is required with --shift and --offset");
  if (c.shift) return OffsetBall{{*c.shift, 0.0, 0.0}, *c.rho};
  return two_ball_region(*c.offset, *c.rho);
}

std::optional<PerturbationSpec> perturbation_of(const RunConfig& c) {
  if (c.perturbation_file.empty()) return std::nullopt;
  try {
    const Json j = read_json_file(c.perturbation_file);
    PerturbationSpec p = perturbation_from_json(j);
    if (!j.contains("mass")) p.mass = MassParam(c.mass);
    return p;
  } catch (const InputError& e) {
    const std::string what = e.what();
    throw UsageError(what.rfind(c.perturbation_file, 0) == 0 ? what : c.perturbation_file + ": " + what);
  }
}

// Report emitters ------------------------------------------------------------

Json cmd_profile(const RunConfig& c) {
  const MassParam m(c.mass);
  return to_json(profile_point(m, radius_of(c, m)), m);
}

Json cmd_chart(const RunConfig& c) {
  const MassParam m(c.mass);
  const ChartParams chart = chart_params(m, radius_of(c, m));
  Json gaps = Json::array();
  for (double tau : parse_values(c.taus)) gaps.push_back(to_json(u_gap_bound(chart, tau)));
  std::vector<double> grid;
  for (int k = 0; k <= 200; ++k) grid.push_back(chart.c * std::pow(100.0, k / 200.0));
  const FirstIntegralTrace fi = first_integral(sample_u_profile(chart, grid));
  return Json{{"chart", to_json(chart)},
              {"u_at_c", u_profile(chart, chart.c)},
              {"u_gluing_error", std::abs(u_profile(chart, chart.c) - chart.alpha)},
              {"cone_scalar_curvature_at_c", cone_scalar_curvature(chart.alpha, chart.c)},
              {"first_integral", Json{{"median", fi.median}, {"relative_deviation", fi.relative_deviation()}}},
              {"gap", gaps}};
}

Json cmd_w_profile(const RunConfig& c) {
  const MassParam m(c.mass);
  const ChartParams chart = chart_params(m, radius_of(c, m));
  const OdeControl ode = ode_of(c);
  const WSolution sol = solve_w(chart, ode);
  const InnerMinimum mn = inner_area_minimum(chart, sol.profile, ode);
  const RadialProfile& p = sol.profile;
  // Hawking mass is monitored where w stays moderate; near the blow-up the
  // integrand loses relative accuracy.
  double dev = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p.values[k] <= 1e3) dev = std::max(dev, std::abs(chart_hawking_mass(chart, p, p.grid[k], ode) - m.value()));
  Json samples = Json::array();
  const std::size_t stride = std::max<std::size_t>(1, p.size() / std::max(1, c.samples));
  for (std::size_t k = 0; k < p.size(); k += stride)
    samples.push_back(Json{{"s", p.grid[k]}, {"w", p.values[k]}, {"dw", p.derivs[k]}});
  return Json{{"chart", to_json(chart)},
              {"s0_estimate", sol.s0_estimate},
              {"reached_blowup", sol.reached_blowup},
              {"sample_count", p.size()},
              {"area_minimum", Json{{"s", mn.s_min}, {"area", mn.area_min}, {"conclusive", mn.conclusive}}},
              {"horizon_area", 16.0 * kPi * m.value() * m.value()},
              {"hawking_mass_max_deviation", dev},
              {"samples", samples}};
}

Json cmd_region_report(const RunConfig& c) {
  const MassParam m(c.mass);
  const Region region = region_of(c);
  validate_region(region, m.horizon_radius());
  const auto pert = perturbation_of(c);
  const MetricSelector sel = pert ? MetricSelector{*pert} : MetricSelector{SchwarzschildSelector{m}};
  const SurfaceQuadrature q = make_surface_quadrature(c.n_theta);
  const auto g = make_metric(sel);
  return Json{{"region", region_to_json(region)},
              {"metric", selector_name(sel)},
              {"horizon_component", has_horizon_component(region, m.horizon_radius())},
              {"min_boundary_radius", min_boundary_radius(region)},
              {"max_boundary_radius", max_boundary_radius(region)},
              {"volume", to_json(region_volume(region, *g, q))},
              {"area", to_json(boundary_area(region, *g, q))},
              {"off_center", to_json(off_center_classify(region, sel, c.tau, q))}};
}

Json cmd_deficit(const RunConfig& c) {
  const Region region = region_of(c);
  const SurfaceQuadrature q = make_surface_quadrature(c.n_theta);
  if (const auto pert = perturbation_of(c))
    return to_json(perturbed_deficit_check(*pert, region, c.tau, c.eta, c.theta, q));
  return to_json(schwarzschild_deficit_check(MassParam(c.mass), region, c.tau, q));
}

Json cmd_chain(const RunConfig& c) {
  return to_json(bray_chain(MassParam(c.mass), region_of(c), make_surface_quadrature(c.n_theta), c.chart_radius));
}

PerturbationSpec audit_spec(const RunConfig& c) {
  return perturbation_of(c).value_or(audit_perturbation(MassParam(c.mass)));
}

Json cmd_theorem_audit(const RunConfig& c) {
  const PerturbationSpec pert = audit_spec(c);
  const std::vector<double> radii = parse_values(c.radii);
  const SurfaceQuadrature q = make_surface_quadrature(c.n_theta);
  const auto reports = parallel_map<TheoremStepReport>(
      radii.size(), [&](std::size_t k) { return theorem_step_audit(pert, audit_region(radii[k]), c.tau, q); });
  Json rows = Json::array();
  std::vector<double> rc, rd, re, rf;
  bool g_all = true;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    Json row = to_json(reports[k]);
    row["r_target"] = radii[k];
    rows.push_back(row);
    rc.push_back(reports[k].residual_c);
    rd.push_back(reports[k].residual_d);
    re.push_back(reports[k].residual_e);
    rf.push_back(reports[k].residual_f);
    g_all = g_all && reports[k].g_holds;
  }
  const Json bounded{{"c", no_growth_trend(rc)}, {"d", no_growth_trend(rd)}, {"e", no_growth_trend(re)},
                     {"f", no_growth_trend(rf)}};
  return Json{{"perturbation", perturbation_to_json(pert)},
              {"region_family", "horizon plus ball of radius r_target centered at 3 r_target"},
              {"rows", rows},
              {"residuals_bounded", bounded},
              {"step_g_holds", g_all}};
}

MinimizeReport run_minimize(const RunConfig& c, double r) {
  const MassParam m(c.mass);
  const auto pert = perturbation_of(c);
  const std::optional<MetricSelector> sel =
      pert ? std::optional<MetricSelector>(MetricSelector{*pert}) : std::nullopt;
  GraphSurface init;
  if (!c.initial_file.empty()) {
    try {
      init = surface_from_json(read_json_file(c.initial_file));
    } catch (const InputError& e) {
      throw UsageError(e.what());
    }
  } else if (c.random_amplitude) {
    init = random_surface(c.graph_n_theta, r, *c.random_amplitude, c.l_max, c.seed);
  } else {
    init = ellipsoidal_surface(c.graph_n_theta, r, c.eps);
  }
  double V = 0.0;
  if (c.volume && !c.radius) {
    V = *c.volume;
  } else {
    V = pert ? graph_volume(sphere_surface(init.n_theta, r), PerturbedMetric(*pert)) : volume_to(m, r);
  }
  OptimizerConfig cfg;
  cfg.step_size = c.step_size;
  cfg.volume_tol = c.volume_tol;
  cfg.grad_tol = c.grad_tol;
  cfg.max_iters = c.max_iters;
  cfg.seed = c.seed;
  return minimize(init, m, V, cfg, sel);
}

Json cmd_minimize(const RunConfig& c) {
  const MassParam m(c.mass);
  const double r = radius_of(c, m);
  const MinimizeReport rep = run_minimize(c, r);
  Json j = to_json(rep, c.emit_surface);
  j["sphere_mean_curvature"] = sphere_mean_curvature(m, rep.matched_r);
  return j;
}

Json cmd_decay(const RunConfig& c) {
  const SurfaceQuadrature q = make_surface_quadrature(c.n_theta);
  const PlaneAnnulus plane{c.r0, c.annulus};
  Json coarea = Json::array();
  for (double gamma : parse_values(c.gammas)) {
    Json j = to_json(coarea_bound_check(plane, gamma, q));
    j["gamma"] = gamma;
    coarea.push_back(j);
  }
  Json out{{"surface", Json{{"type", "plane"}, {"r0", c.r0}, {"R", number(c.annulus)}}}, {"coarea", coarea}};
  if (std::isfinite(c.annulus)) {
    Json j = to_json(beta_bound_check(plane, c.beta, q));
    j["beta"] = c.beta;
    out["beta"] = j;
  }
  Json radial = Json::array();
  for (double a : parse_values(c.alphas)) {
    Json j = to_json(exterior_radial_integral(a, c.r0));
    j["alpha"] = a;
    j["r0"] = c.r0;
    radial.push_back(j);
  }
  out["exterior_radial_integral"] = radial;
  if (const auto pert = perturbation_of(c)) {
    Json vol = Json::array();
    for (double a : parse_values(c.alphas)) {
      Json j = to_json(volume_diff_bound_check(*pert, CenteredShell{c.r0, c.shell}, a, c.r0, q));
      j["alpha"] = a;
      vol.push_back(j);
    }
    out["volume_difference"] = vol;
  }
  return out;
}

// Sweeps ----------------------------------------------------------------------

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

Table sweep_table(const RunConfig& c) {
  const MassParam m(c.mass);
  const SurfaceQuadrature q = make_surface_quadrature(c.n_theta);
  Table t;
  using Row = std::vector<Json>;
  const std::string& kind = c.sweep_kind;
  if (kind == "deficit") {
    if (!c.rho) throw UsageError("sweep deficit needs --rho");
    const std::vector<double> ds = parse_values(c.offsets);
    t.columns = {"d", "V", "r", "eta", "area", "bound", "margin"};
    t.rows = parallel_map<Row>(ds.size(), [&](std::size_t k) {
      const DeficitReport r = schwarzschild_deficit_check(m, two_ball_region(ds[k], *c.rho), c.tau, q);
      return Row{ds[k], r.V, r.r, r.eta, r.area_lhs, r.bound_rhs, r.margin};
    });
  } else if (kind == "profile") {
    const std::vector<double> rs = parse_values(c.radii);
    t.columns = {"r", "V", "area", "H", "hawking_mass", "isoperimetric_ratio"};
    for (double r : rs) {
      const ProfilePoint p = profile_point(m, r);
      t.rows.push_back({r, p.volume, p.area, p.mean_curvature,
                        hawking_mass(p.area, p.mean_curvature * p.mean_curvature * p.area),
                        isoperimetric_ratio(m, r)});
    }
  } else if (kind == "gap") {
    const std::vector<double> rs = parse_values(c.radii);
    const std::vector<double> taus = parse_values(c.taus);
    t.columns = {"r", "c", "alpha", "tau", "lhs", "rhs", "ratio", "holds"};
    for (double r : rs) {
      const ChartParams chart = chart_params(m, r);
      for (double tau : taus) {
        const GapReport g = u_gap_bound(chart, tau);
        t.rows.push_back({r, chart.c, chart.alpha, tau, g.lhs, g.rhs, g.ratio(), g.holds});
      }
    }
  } else if (kind == "chain") {
    if (!c.rho) throw UsageError("sweep chain needs --rho");
    const std::vector<double> ds = parse_values(c.offsets);
    t.columns = {"d", "matched_r", "chart_r", "A_gm", "A_gm_Sr", "all_hold"};
    t.rows = parallel_map<Row>(ds.size(), [&](std::size_t k) {
      const ChainReport r = bray_chain(m, two_ball_region(ds[k], *c.rho), q);
      return Row{ds[k], r.matched_r, r.chart_r, r.term("A_gm"), r.term("A_gm_Sr"), r.all_hold()};
    });
  } else if (kind == "audit") {
    const PerturbationSpec pert = audit_spec(c);
    const std::vector<double> rs = parse_values(c.radii);
    t.columns = {"r_target", "r", "eta", "residual_c", "residual_d", "residual_e", "residual_f",
                 "g_holds", "residual_h", "i_difference", "j_slack"};
    t.rows = parallel_map<Row>(rs.size(), [&](std::size_t k) {
      const TheoremStepReport a = theorem_step_audit(pert, audit_region(rs[k]), c.tau, q);
      return Row{rs[k], a.r, a.eta, a.residual_c, a.residual_d, a.residual_e, a.residual_f,
                 a.g_holds, a.residual_h, a.i_difference, a.j_slack};
    });
  } else if (kind == "minimize") {
    const std::vector<double> rs = parse_values(c.radii);
    t.columns = {"r", "iterations", "converged", "cmc_deviation", "mean_H", "sphere_H", "centering", "area"};
    t.rows = parallel_map<Row>(rs.size(), [&](std::size_t k) {
      const MinimizeReport r = run_minimize(c, rs[k]);
      return Row{rs[k], r.iterations, r.converged, r.cmc_deviation, r.mean_H,
                 sphere_mean_curvature(m, r.matched_r), r.centering, r.area};
    });
  } else {
    throw UsageError("unknown sweep kind '" + kind + "' (deficit, profile, gap, chain, audit, minimize)");
  }
  return t;
}

std::string csv_cell(const Json& v) {
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt(v.get<double>());
  return v.dump();
}

// Verification suite ------------------------------------------------------------

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
};

std::vector<Check> verify_suite(const RunConfig& c) {
  const MassParam m(c.mass);
  const double M = m.value();
  const SurfaceQuadrature q = make_surface_quadrature(std::min(c.n_theta, 32));
  std::vector<Check> out;
  auto at_most = [&](std::string name, double value, double limit) {
    out.push_back({std::move(name), value, limit, value <= limit});
  };

  double hm = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double r = 0.5 * M * std::pow(2e4, (k + 1) / 20.0);
    const ProfilePoint p = profile_point(m, r);
    hm = std::max(hm, std::abs(hawking_mass(p.area, p.mean_curvature * p.mean_curvature * p.area) / M - 1.0));
  }
  at_most("hawking mass identity (relative)", hm, 1e-9);

  for (double r : {10.0 * M, 100.0 * M}) {
    const ChartParams chart = chart_params(m, r);
    at_most("chart gluing |u(c) - alpha| at r = " + fmt(r), std::abs(u_profile(chart, chart.c) - chart.alpha), 1e-9);
    std::vector<double> grid;
    for (int k = 0; k < 1000; ++k) grid.push_back(chart.c * std::pow(1e3, k / 999.0));
    const RadialProfile u = sample_u_profile(chart, grid);
    double worst = 0.0;
    for (std::size_t k = 1; k < u.size(); ++k) {
      if (!(u.values[k] > u.values[k - 1])) worst = std::max(worst, 1.0);
      if (!(u.values[k] > chart.alpha && u.values[k] < 1.0)) worst = std::max(worst, 1.0);
    }
    at_most("u increasing within (alpha, 1) at r = " + fmt(r), worst, 0.0);
    at_most("first integral relative deviation at r = " + fmt(r), first_integral(u).relative_deviation(), 1e-7);
  }

  {
    const ChartParams chart = chart_params(m, 10.0 * M);
    const OdeControl ode = ode_of(c);
    const WSolution sol = solve_w(chart, ode);
    double dev = 0.0;
    for (std::size_t k = 0; k < sol.profile.size(); ++k)
      if (sol.profile.values[k] <= 1e3)
        dev = std::max(dev, std::abs(chart_hawking_mass(chart, sol.profile, sol.profile.grid[k], ode) / M - 1.0));
    at_most("interior hawking mass deviation", dev, 1e-5);
    const InnerMinimum mn = inner_area_minimum(chart, sol.profile, ode);
    at_most("inner area minimum vs horizon area", std::abs(mn.area_min / (16.0 * kPi * M * M) - 1.0), 1e-2);
  }

  {
    const GapReport g = u_gap_bound(chart_params(m, 100.0 * M), 2.0);
    out.push_back({"gap estimate at r = 100 m, tau = 2", g.ratio(), 1.0, g.holds});
  }

  for (const Region& region : {Region{CenteredBall{10.0 * M}}, Region{OffsetBall{{3.0 * M, 0.0, 0.0}, 10.0 * M}},
                               two_ball_region(40.0 * M, 10.0 * M)}) {
    const ChainReport ch = bray_chain(m, region, q);
    out.push_back({"bray chain term by term", static_cast<double>(ch.steps.size()), 0.0, ch.all_hold()});
  }

  {
    const DeficitReport d = schwarzschild_deficit_check(m, two_ball_region(40.0 * M, 10.0 * M), 2.0, q);
    out.push_back({"deficit bound, two-ball region", d.margin, 0.0, d.holds && d.margin > 0.0});
    const DeficitReport e = schwarzschild_deficit_check(m, CenteredBall{20.0 * M}, 2.0, q);
    at_most("deficit equality on a centered ball", std::abs(e.margin), 10.0 * e.error);
  }

  {
    const BoundCheck b = coarea_bound_check(PlaneAnnulus{1.0}, 3.0, q);
    out.push_back({"coarea bound on the plane, gamma = 3", b.integral, b.bound, b.holds});
    at_most("exterior radial integral closed form", exterior_radial_integral(2.0, 2.0).relative_difference(), 1e-8);
  }

  {
    const double r = 20.0 * M;
    OptimizerConfig cfg;
    const MinimizeReport rep = minimize(sphere_surface(12, r), m, volume_to(m, r), cfg);
    out.push_back({"centered sphere is stationary", static_cast<double>(rep.iterations), 0.0,
                   rep.iterations == 0 && rep.converged});
    const GraphSurface s = random_surface(8, r, 0.1, 3, c.seed);
    const SchwarzschildMetric g(m);
    const AreaGradient ag = area_and_gradient(s, g);
    double worst = 0.0;
    for (std::size_t k = 0; k < s.rho.size(); k += 7) {
      const double h = 1e-4 * s.rho[k];
      GraphSurface p = s, n = s;
      p.rho[k] += h;
      n.rho[k] -= h;
      const double fd = (area_and_gradient(p, g).area - area_and_gradient(n, g).area) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - ag.gradient[k]) / std::abs(ag.gradient[k]));
    }
    at_most("area gradient vs central differences", worst, 1e-6);
  }
  return out;
}

// Driver ------------------------------------------------------------------------

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.output);
  if (!f) throw UsageError("cannot write " + c.output);
  f << text;
}

int dispatch(const RunConfig& c, std::ostream& out) {
  const std::string& cmd = c.subcommand;
  if (cmd == "sweep") {
    const Table t = sweep_table(c);
    std::ostringstream s;
    if (c.format == "csv") {
      for (std::size_t k = 0; k < t.columns.size(); ++k) s << (k ? "," : "") << t.columns[k];
      s << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) s << (k ? "," : "") << csv_cell(row[k]);
        s << '\n';
      }
    } else {
      Json rows = Json::array();
      for (const auto& row : t.rows) {
        Json j = Json::object();
        for (std::size_t k = 0; k < row.size(); ++k) j[t.columns[k]] = row[k];
        rows.push_back(j);
      }
      s << report_envelope("sweep " + c.sweep_kind, settings_of(c), Json{{"rows", rows}}).dump(2) << '\n';
    }
    emit(c, s.str(), out);
    return kExitOk;
  }
  if (cmd == "verify") {
    const std::vector<Check> checks = verify_suite(c);
    Json list = Json::array();
    bool all = true;
    for (const Check& k : checks) {
      list.push_back(Json{{"name", k.name}, {"value", k.value}, {"limit", k.limit}, {"passed", k.passed}});
      all = all && k.passed;
    }
    emit(c, report_envelope(cmd, settings_of(c), Json{{"checks", list}, {"passed", all}}).dump(2) + "\n", out);
    return all ? kExitOk : kExitVerifyFailed;
  }
  Json result;
  if (cmd == "profile")
    result = cmd_profile(c);
  else if (cmd == "chart")
    result = cmd_chart(c);
  else if (cmd == "w-profile")
    result = cmd_w_profile(c);
  else if (cmd == "region-report")
    result = cmd_region_report(c);
  else if (cmd == "deficit")
    result = cmd_deficit(c);
  else if (cmd == "chain")
    result = cmd_chain(c);
  else if (cmd == "theorem-audit")
    result = cmd_theorem_audit(c);
  else if (cmd == "minimize")
    result = cmd_minimize(c);
  else if (cmd == "decay-check")
    result = cmd_decay(c);
  else
    throw UsageError("unknown subcommand '" + cmd + "'");
  emit(c, report_envelope(cmd, settings_of(c), std::move(result)).dump(2) + "\n", out);
  return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--mass", c.mass, "Schwarzschild mass m > 0");
  sub->add_option("--n-theta", c.n_theta, "surface quadrature rings")->check(CLI::Range(4, 512));
  sub->add_option("--output,-o", c.output, "write the report to this file");
}

void add_radius(CLI::App* sub, RunConfig& c) {
  auto* r = sub->add_option("--radius", c.radius, "isotropic radius");
  auto* v = sub->add_option("--volume", c.volume, "horizon-relative volume");
  r->excludes(v);
}

void add_region(CLI::App* sub, RunConfig& c) {
  sub->add_option("--region", c.region_file, "region JSON file");
  sub->add_option("--centered", c.centered, "centered ball of this radius");
  sub->add_option("--shift", c.shift, "ball of radius --rho centered at (shift, 0, 0), containing the horizon");
  sub->add_option("--offset", c.offset, "horizon plus a ball of radius --rho centered at (offset, 0, 0)");
  sub->add_option("--rho", c.rho, "ball radius for --shift and --offset");
}

}  // namespace

std::vector<double> SweepRange::values() const {
  std::vector<double> out;
  const double slack = 1e-9 * std::max(std::abs(start), std::abs(stop));
  for (double x = start; x <= stop + slack && out.size() < 100000; x = geometric ? x * step : x + step) out.push_back(x);
  return out;
}

SweepRange parse_sweep(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos || b + 2 > text.size())
    throw std::invalid_argument("sweep range must be start:stop:*k or start:stop:+k");
  SweepRange r;
  r.start = parse_double(text.substr(0, a));
  r.stop = parse_double(text.substr(a + 1, b - a - 1));
  const char op = text[b + 1];
  if (op != '*' && op != '+') throw std::invalid_argument("sweep step must start with * or +");
  r.geometric = op == '*';
  r.step = parse_double(text.substr(b + 2));
  if (r.geometric ? !(r.step > 1.0 && r.start > 0.0) : !(r.step > 0.0))
    throw std::invalid_argument("sweep step must increase the value");
  if (!(r.stop >= r.start)) throw std::invalid_argument("sweep range is empty");
  return r;
}

std::vector<double> parse_values(const std::string& text) {
  try {
    if (text.find(':') != std::string::npos) return parse_sweep(text).values();
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
    if (out.empty()) throw std::invalid_argument("empty value list");
    return out;
  } catch (const UsageError& e) {
    throw std::invalid_argument(e.what());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Isoperimetry and effective volume comparison in Schwarzschild", "bray-iso"};
  app.require_subcommand(1);

  auto* profile = app.add_subcommand("profile", "centered sphere S_r: phi, area, H, V, Hawking mass");
  add_common(profile, c);
  add_radius(profile, c);

  auto* chart = app.add_subcommand("chart", "volume-preserving chart of S_r and the u_c gap estimate");
  add_common(chart, c);
  add_radius(chart, c);
  chart->add_option("--tau", c.taus, "tau values for the gap estimate");

  auto* wprof = app.add_subcommand("w-profile", "interior conformal factor w_c and its area minimum");
  add_common(wprof, c);
  add_radius(wprof, c);
  wprof->add_option("--ode-tol", c.ode_tol, "ODE absolute and relative tolerance");
  wprof->add_option("--samples", c.samples, "number of emitted samples");

  auto* region = app.add_subcommand("region-report", "volume, area and off-center parameter of a region");
  add_common(region, c);
  add_region(region, c);
  region->add_option("--tau", c.tau, "off-center threshold factor");
  region->add_option("--perturbation", c.perturbation_file, "perturbation JSON file");

  auto* deficit = app.add_subcommand("deficit", "effective volume comparison for a region");
  add_common(deficit, c);
  add_region(deficit, c);
  deficit->add_option("--tau", c.tau, "off-center threshold factor");
  deficit->add_option("--eta", c.eta, "off-center parameter (perturbed check only)");
  deficit->add_option("--theta", c.theta, "area growth constant (perturbed check only)");
  deficit->add_option("--perturbation", c.perturbation_file, "perturbation JSON file");

  auto* chain = app.add_subcommand("chain", "term-by-term refinement of Bray's chain");
  add_common(chain, c);
  add_region(chain, c);
  chain->add_option("--chart-radius", c.chart_radius, "radius of the chart sphere");

  auto* audit = app.add_subcommand("theorem-audit", "proof-step audit over a doubling sweep");
  add_common(audit, c);
  audit->add_option("--radius", c.radii, "target radii (range or list)");
  audit->add_option("--tau", c.tau, "off-center threshold factor");
  audit->add_option("--perturbation", c.perturbation_file, "perturbation JSON file");

  auto* mini = app.add_subcommand("minimize", "volume-constrained area minimization over radial graphs");
  add_common(mini, c);
  add_radius(mini, c);
  mini->add_option("--graph-n-theta", c.graph_n_theta, "graph grid rings")->check(CLI::Range(4, 256));
  mini->add_option("--eps", c.eps, "ellipsoidal initial perturbation");
  mini->add_option("--random", c.random_amplitude, "random initial perturbation amplitude");
  mini->add_option("--l-max", c.l_max, "highest degree of the random perturbation");
  mini->add_option("--seed", c.seed, "seed of the random perturbation");
  mini->add_option("--initial", c.initial_file, "initial surface JSON file");
  mini->add_option("--grad-tol", c.grad_tol, "stationarity tolerance");
  mini->add_option("--volume-tol", c.volume_tol, "relative volume tolerance");
  mini->add_option("--step-size", c.step_size, "initial trial step");
  mini->add_option("--max-iters", c.max_iters, "iteration cap");
  mini->add_option("--perturbation", c.perturbation_file, "perturbation JSON file");
  mini->add_flag("--emit-surface", c.emit_surface, "include the final surface");

  auto* decay = app.add_subcommand("decay-check", "co-area, beta and exterior volume integral estimates");
  add_common(decay, c);
  decay->add_option("--gamma", c.gammas, "gamma values (> 2)");
  decay->add_option("--beta", c.beta, "beta in (0, 2), needs --annulus");
  decay->add_option("--alpha", c.alphas, "alpha values in (1, 3)");
  decay->add_option("--r0", c.r0, "cutoff radius >= 1");
  decay->add_option("--annulus", c.annulus, "outer radius of the plane annulus");
  decay->add_option("--shell", c.shell, "outer radius of the volume test shell");
  decay->add_option("--perturbation", c.perturbation_file, "perturbation JSON file");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep table");
  add_common(sweep, c);
  sweep->add_option("kind", c.sweep_kind, "deficit, profile, gap, chain, audit or minimize")->required();
  sweep->add_option("--tau", c.taus, "tau value(s)");
  sweep->add_option("--offset", c.offsets, "ball offsets (range or list)");
  sweep->add_option("--rho", c.rho, "ball radius");
  sweep->add_option("--radius", c.radii, "radii (range or list)");
  sweep->add_option("--perturbation", c.perturbation_file, "perturbation JSON file");
  sweep->add_option("--eps", c.eps, "ellipsoidal initial perturbation (minimize)");
  sweep->add_option("--graph-n-theta", c.graph_n_theta, "graph grid rings (minimize)");
  sweep->add_option("--grad-tol", c.grad_tol, "stationarity tolerance (minimize)");
  sweep->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  add_common(verify, c);
  verify->add_option("--ode-tol", c.ode_tol, "ODE absolute and relative tolerance");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  for (CLI::App* sub : app.get_subcommands()) c.subcommand = sub->get_name();
  if (c.subcommand == "sweep") {
    // Sweeps take --tau as a single value for deficit/audit and a list for gap.
    if (c.sweep_kind != "gap") {
      try {
        c.tau = parse_values(c.taus).front();
      } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
      }
      if (sweep->count("--tau") == 0) c.tau = 2.0;
    }
    if (sweep->count("--radius") == 0) {
      if (c.sweep_kind == "minimize") c.radii = "20,50,100";
      if (c.sweep_kind == "profile" || c.sweep_kind == "gap") c.radii = "10:10000:*10";
    }
    if (c.sweep_kind == "gap" && sweep->count("--tau") == 0) c.taus = "1.5,2,4";
  } else if (c.subcommand != "chart") {
    c.taus = fmt(c.tau);
  }
  if (c.subcommand == "sweep" && sweep->count("--format") == 0) c.format = "csv";
  if (c.subcommand != "sweep" && c.subcommand != "profile") c.format = "json";

  try {
    return dispatch(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OdeFailure& e) {
    const Json partial{{"status", "numeric_failure"},
                       {"error", e.what()},
                       {"partial_samples", e.partial().size()},
                       {"last_s", e.partial().size() ? Json(e.partial().grid.front()) : Json(nullptr)}};
    out << report_envelope(c.subcommand, settings_of(c), partial).dump(2) << '\n';
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const NumericError& e) {
    const Json partial{{"status", "numeric_failure"}, {"error", e.what()}};
    out << report_envelope(c.subcommand, settings_of(c), partial).dump(2) << '\n';
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, std::cout, std::cerr);
}

}  // namespace brayiso
