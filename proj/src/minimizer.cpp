#include "brayiso/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/tools/roots.hpp>

#include "brayiso/errors.hpp"
#include "brayiso/sphere_grid.hpp"

namespace brayiso {

namespace {

constexpr double kPi = std::numbers::pi;

double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void axpy(double t, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += t * x[k];
}

// Grid, transform and metric shared by every evaluation of one surface family.
struct GraphContext {
  SurfaceQuadrature q;
  SphericalTransform T;
  explicit GraphContext(int n_theta) : q(make_surface_quadrature(n_theta)), T(q) {}
};

AreaGradient area_gradient_in(const GraphContext& ctx, const std::vector<double>& rho, const MetricField& g) {
  const SurfaceQuadrature& q = ctx.q;
  const std::vector<double> rt = ctx.T.apply(rho, Deriv::theta);
  const std::vector<double> rp = ctx.T.apply(rho, Deriv::phi);
  const std::size_t n = q.size();
  AreaGradient out;
  out.gradient.assign(n, 0.0);
  std::vector<double> w_rt(n), w_q(n);
  for (int i = 0; i < q.n_theta; ++i) {
    const double s = q.sin_theta[i];
    for (int j = 0; j < q.n_phi; ++j) {
      const std::size_t k = q.index(i, j);
      const Vec3 nh = q.nodes[k], et = q.e_theta(i, j), ep = q.e_phi(j);
      const double r = rho[k];
      const Mat3 M = g.tensor(r * nh);
      const Mat3 Mp = g.radial_derivative(r * nh);
      const Vec3 Xt = rt[k] * nh + r * et;
      const Vec3 Xp = (rp[k] / s) * nh + r * ep;
      const double E = form(M, Xt, Xt), G = form(M, Xp, Xp), F = form(M, Xt, Xp);
      const double a = std::sqrt(E * G - F * F);
      const double dE = 2.0 * form(M, et, Xt) + form(Mp, Xt, Xt);
      const double dG = 2.0 * form(M, ep, Xp) + form(Mp, Xp, Xp);
      const double dF = form(M, et, Xp) + form(M, Xt, ep) + form(Mp, Xt, Xp);
      const double nMt = form(M, nh, Xt), nMp = form(M, nh, Xp);
      const double W = q.weights[k];
      out.area += W * a;
      out.gradient[k] = W * (dE * G + E * dG - 2.0 * F * dF) / (2.0 * a);
      w_rt[k] = W * (nMt * G - F * nMp) / a;
      w_q[k] = W * (E * nMp - F * nMt) / (a * s);
    }
  }
  const std::vector<double> gt = ctx.T.apply_transpose(w_rt, Deriv::theta);
  const std::vector<double> gp = ctx.T.apply_transpose(w_q, Deriv::phi);
  for (std::size_t k = 0; k < n; ++k) out.gradient[k] += gt[k] + gp[k];
  return out;
}

double volume_in(const SurfaceQuadrature& q, const std::vector<double>& rho, const MetricField& g) {
  double v = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) v += q.weights[k] * g.radial_volume(q.nodes[k], rho[k]);
  return v;
}

std::vector<double> volume_gradient_in(const SurfaceQuadrature& q, const std::vector<double>& rho,
                                       const MetricField& g) {
  std::vector<double> out(q.size());
  for (std::size_t k = 0; k < q.size(); ++k)
    out[k] = q.weights[k] * g.volume_density(rho[k] * q.nodes[k]) * rho[k] * rho[k];
  return out;
}

std::vector<double> project_in(const SurfaceQuadrature& q, const std::vector<double>& rho, const MetricField& g,
                               double target, double tol) {
  require_domain(target > 0.0, "target volume must be positive");
  const double h = g.horizon_radius();
  const double rmin = *std::min_element(rho.begin(), rho.end());
  const double lo = h > 0.0 ? h / rmin * (1.0 + 1e-12) : 1e-6;
  auto scaled = [&](double lam) {
    std::vector<double> out(rho);
    for (double& r : out) r *= lam;
    return out;
  };
  auto f = [&](double lam) {
    const std::vector<double> r = scaled(lam);
    double dv = 0.0;
    const std::vector<double> grad = volume_gradient_in(q, r, g);
    for (std::size_t k = 0; k < r.size(); ++k) dv += grad[k] * rho[k];
    return std::make_pair(volume_in(q, r, g) - target, dv);
  };
  if (std::abs(f(1.0).first) <= tol * target) return rho;
  require_domain(f(lo).first < 0.0, "volume projection would push the graph inside the horizon");
  double hi = 2.0;
  while (f(hi).first < 0.0) hi *= 2.0;
  std::uintmax_t iters = 100;
  const double lam = boost::math::tools::newton_raphson_iterate(f, 1.0, lo, hi, 50, iters);
  std::vector<double> out = scaled(lam);
  const double err = std::abs(volume_in(q, out, g) - target);
  // Near the horizon only an absolute accuracy on the horizon scale is attainable.
  if (err > tol * target && err > 1e-13 * (target + h * h * h))
    throw NumericError("volume projection did not reach the tolerance");
  return out;
}

CurvatureField curvature_in(const GraphContext& ctx, const std::vector<double>& rho, const MetricField& g) {
  const SurfaceQuadrature& q = ctx.q;
  const std::size_t n = q.size();
  CurvatureField out;
  out.H.assign(n, 0.0);
  const AreaGradient ag = area_gradient_in(ctx, rho, g);
  const bool conformal = g.conformal_factor(rho[0] * q.nodes[0]).has_value();
  out.geometric = conformal;
  std::vector<double> dA(n);
  if (conformal) {
    const auto r_t = ctx.T.apply(rho, Deriv::theta), r_p = ctx.T.apply(rho, Deriv::phi);
    const auto r_tt = ctx.T.apply(rho, Deriv::theta_theta), r_tp = ctx.T.apply(rho, Deriv::theta_phi),
               r_pp = ctx.T.apply(rho, Deriv::phi_phi);
    for (int i = 0; i < q.n_theta; ++i) {
      const double s = q.sin_theta[i], c = q.cos_theta[i];
      for (int j = 0; j < q.n_phi; ++j) {
        const std::size_t k = q.index(i, j);
        const Vec3 nh = q.nodes[k], et = q.e_theta(i, j), ep = q.e_phi(j);
        const double r = rho[k];
        const Vec3 Xt = r_t[k] * nh + r * et;
        const Vec3 Xp = r_p[k] * nh + (r * s) * ep;
        const Vec3 Xtt = (r_tt[k] - r) * nh + (2.0 * r_t[k]) * et;
        const Vec3 Xtp = r_tp[k] * nh + (r_t[k] * s + r * c) * ep + r_p[k] * et;
        const Vec3 Xpp = (r_pp[k] - r * s * s) * nh + (2.0 * r_p[k] * s) * ep + (-r * s * c) * et;
        const Vec3 cr = cross(Xt, Xp);
        const Vec3 nu = (1.0 / norm(cr)) * cr;
        const double E = dot(Xt, Xt), F = dot(Xt, Xp), G = dot(Xp, Xp);
        const double H_delta =
            -(dot(Xtt, nu) * G - 2.0 * dot(Xtp, nu) * F + dot(Xpp, nu) * E) / (E * G - F * F);
        const Vec3 x = r * nh;
        const double psi = *g.conformal_factor(x);
        out.H[k] = (H_delta + 4.0 * dot(nu, g.log_conformal_gradient(x))) / (psi * psi);
      }
    }
  } else {
    const std::vector<double> gv = volume_gradient_in(q, rho, g);
    for (std::size_t k = 0; k < n; ++k) out.H[k] = ag.gradient[k] / gv[k];
  }
  // Area weights per node from the same discretization.
  const std::vector<double> rt = ctx.T.apply(rho, Deriv::theta), rp = ctx.T.apply(rho, Deriv::phi);
  double sum = 0.0, total = 0.0;
  for (int i = 0; i < q.n_theta; ++i) {
    for (int j = 0; j < q.n_phi; ++j) {
      const std::size_t k = q.index(i, j);
      const Vec3 nh = q.nodes[k];
      const Mat3 M = g.tensor(rho[k] * nh);
      const Vec3 Xt = rt[k] * nh + rho[k] * q.e_theta(i, j);
      const Vec3 Xp = (rp[k] / q.sin_theta[i]) * nh + rho[k] * q.e_phi(j);
      const double E = form(M, Xt, Xt), G = form(M, Xp, Xp), F = form(M, Xt, Xp);
      const double w = q.weights[k] * std::sqrt(E * G - F * F);
      sum += w * out.H[k];
      total += w;
    }
  }
  out.mean = sum / total;
  for (double H : out.H) out.deviation = std::max(out.deviation, std::abs(H - out.mean) / std::abs(out.mean));
  return out;
}

// Sobolev preconditioner (2 - Laplacian)^-1 applied to a node gradient.
std::vector<double> precondition(const GraphContext& ctx, const std::vector<double>& grad) {
  std::vector<double> f(grad.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = grad[k] / ctx.q.weights[k];
  SphericalTransform::Coeffs c = ctx.T.analyze(f);
  const int L = c.band_limit;
  std::size_t idx = 0;
  for (int m = 0; m <= L; ++m) {
    for (int l = m; l <= L; ++l, ++idx) {
      const double s = 1.0 / (2.0 + l * (l + 1.0));
      c.a[idx] *= s;
      c.b[idx] *= s;
    }
  }
  return ctx.T.synthesize(c, ctx.q, Deriv::value);
}

struct Reduced {
  double area = 0.0;
  std::vector<double> grad;  // area gradient minus mu times volume gradient
  double mu = 0.0;
  double stationarity = 0.0;
};

Reduced reduced_gradient(const GraphContext& ctx, const std::vector<double>& rho, const MetricField& g) {
  const AreaGradient ag = area_gradient_in(ctx, rho, g);
  const std::vector<double> gv = volume_gradient_in(ctx.q, rho, g);
  Reduced out;
  out.area = ag.area;
  out.mu = dot_vec(rho, ag.gradient) / dot_vec(rho, gv);
  out.grad = ag.gradient;
  axpy(-out.mu, gv, out.grad);
  for (std::size_t k = 0; k < rho.size(); ++k)
    out.stationarity = std::max(out.stationarity, std::abs(out.grad[k]) / std::abs(out.mu * gv[k]));
  return out;
}

}  // namespace

void GraphSurface::validate(double h, double slope_cap) const {
  require_domain(n_theta >= 2, "graph needs n_theta >= 2");
  const SurfaceQuadrature q = make_surface_quadrature(n_theta);
  require_domain(rho.size() == q.size(), "graph sample count does not match its grid");
  for (double r : rho) require_domain(std::isfinite(r) && r > h, "graph radius must exceed the horizon radius");
  const SphericalTransform T(q);
  const auto rt = T.apply(rho, Deriv::theta), rp = T.apply(rho, Deriv::phi);
  for (int i = 0; i < q.n_theta; ++i)
    for (int j = 0; j < q.n_phi; ++j) {
      const std::size_t k = q.index(i, j);
      const double slope = std::hypot(rt[k], rp[k] / q.sin_theta[i]) / rho[k];
      require_domain(slope <= slope_cap, "graph slope exceeds the smoothness cap");
    }
}

GraphSurface sphere_surface(int n_theta, double r) {
  const SurfaceQuadrature q = make_surface_quadrature(n_theta);
  return {n_theta, std::vector<double>(q.size(), r)};
}

GraphSurface ellipsoidal_surface(int n_theta, double r, double eps) {
  const SurfaceQuadrature q = make_surface_quadrature(n_theta);
  GraphSurface s{n_theta, std::vector<double>(q.size())};
  for (std::size_t k = 0; k < q.size(); ++k) s.rho[k] = r * (1.0 + eps * schmidt_harmonic(2, 0, q.nodes[k]));
  return s;
}

GraphSurface random_surface(int n_theta, double r, double amplitude, int l_max, std::uint64_t seed) {
  require_domain(l_max >= 1 && l_max < n_theta, "l_max must lie in [1, n_theta)");
  const SurfaceQuadrature q = make_surface_quadrature(n_theta);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<HarmonicMode> modes;
  double total = 0.0;
  for (int l = 1; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m) {
      modes.push_back({l, m, coeff(rng)});
      total += std::abs(modes.back().coeff);
    }
  GraphSurface s{n_theta, std::vector<double>(q.size())};
  for (std::size_t k = 0; k < q.size(); ++k) {
    double y = 0.0;
    for (const HarmonicMode& md : modes) y += md.coeff * schmidt_harmonic(md.l, md.m, q.nodes[k]);
    s.rho[k] = r * (1.0 + amplitude * y / total);
  }
  return s;
}

void OptimizerConfig::validate() const {
  require_domain(step_size > 0.0 && volume_tol > 0.0 && grad_tol > 0.0, "optimizer tolerances must be positive");
  require_domain(max_iters >= 1, "max_iters must be at least 1");
  require_domain(history >= 1, "quasi-Newton history must be at least 1");
}

AreaGradient area_and_gradient(const GraphSurface& s, const MetricField& g) {
  s.validate(g.horizon_radius(), std::numeric_limits<double>::infinity());
  return area_gradient_in(GraphContext(s.n_theta), s.rho, g);
}

AreaGradient area_and_gradient(const GraphSurface& s, const MetricSelector& sel) {
  return area_and_gradient(s, *make_metric(sel));
}

double graph_volume(const GraphSurface& s, const MetricField& g) {
  s.validate(g.horizon_radius(), std::numeric_limits<double>::infinity());
  return volume_in(make_surface_quadrature(s.n_theta), s.rho, g);
}

std::vector<double> graph_volume_gradient(const GraphSurface& s, const MetricField& g) {
  s.validate(g.horizon_radius(), std::numeric_limits<double>::infinity());
  return volume_gradient_in(make_surface_quadrature(s.n_theta), s.rho, g);
}

GraphSurface project_volume(const GraphSurface& s, const MetricField& g, double target_V, double volume_tol) {
  s.validate(g.horizon_radius(), std::numeric_limits<double>::infinity());
  return {s.n_theta, project_in(make_surface_quadrature(s.n_theta), s.rho, g, target_V, volume_tol)};
}

GraphSurface project_volume(const GraphSurface& s, MassParam m, double target_V, double volume_tol) {
  return project_volume(s, SchwarzschildMetric(m), target_V, volume_tol);
}

CurvatureField mean_curvature(const GraphSurface& s, const MetricField& g) {
  s.validate(g.horizon_radius(), std::numeric_limits<double>::infinity());
  return curvature_in(GraphContext(s.n_theta), s.rho, g);
}

MinimizeReport minimize(const GraphSurface& initial, MassParam m, double target_V, const OptimizerConfig& cfg,
                        const std::optional<MetricSelector>& metric) {
  cfg.validate();
  const MetricSelector sel = metric.value_or(MetricSelector{SchwarzschildSelector{m}});
  const auto g = make_metric(sel);
  require_domain(std::abs(g->horizon_radius() - m.horizon_radius()) <= 1e-15 * (1.0 + m.value()),
                 "metric mass does not match m");
  initial.validate(m.horizon_radius());
  const GraphContext ctx(initial.n_theta);

  // The iteration lives in the band-limited space of the transform.
  std::vector<double> rho = ctx.T.apply(initial.rho, Deriv::value);
  rho = project_in(ctx.q, rho, *g, target_V, cfg.volume_tol);

  MinimizeReport rep;
  rep.target_volume = target_V;
  Reduced cur = reduced_gradient(ctx, rho, *g);
  rep.area_history.push_back(cur.area);
  std::deque<std::pair<std::vector<double>, std::vector<double>>> pairs;  // (s, y)

  while (cur.stationarity > cfg.grad_tol && rep.iterations < cfg.max_iters) {
    // Two-loop recursion with the Sobolev preconditioner as initial inverse Hessian.
    std::vector<double> d = cur.grad;
    std::vector<double> alphas(pairs.size());
    for (std::size_t p = pairs.size(); p-- > 0;) {
      const auto& [s, y] = pairs[p];
      alphas[p] = dot_vec(s, d) / dot_vec(y, s);
      axpy(-alphas[p], y, d);
    }
    d = precondition(ctx, d);
    if (!pairs.empty()) {
      const auto& [s, y] = pairs.back();
      const double gamma = dot_vec(s, y) / dot_vec(y, precondition(ctx, y));
      for (double& v : d) v *= gamma;
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto& [s, y] = pairs[p];
      const double beta = dot_vec(y, d) / dot_vec(y, s);
      axpy(alphas[p] - beta, s, d);
    }
    for (double& v : d) v = -v;
    double slope = dot_vec(cur.grad, d);
    if (!(slope < 0.0)) {
      pairs.clear();
      d = precondition(ctx, cur.grad);
      for (double& v : d) v = -v;
      slope = dot_vec(cur.grad, d);
    }

    // Armijo backtracking; the allowance covers roundoff in the area sum.
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * cur.area;
    double t = cfg.step_size;
    bool accepted = false;
    std::vector<double> next;
    Reduced trial;
    for (int k = 0; k < 40 && !accepted; ++k, t *= 0.5) {
      std::vector<double> x(rho);
      axpy(t, d, x);
      if (*std::min_element(x.begin(), x.end()) <= m.horizon_radius()) continue;
      try {
        x = project_in(ctx.q, x, *g, target_V, cfg.volume_tol);
      } catch (const std::domain_error&) {
        continue;
      }
      trial = reduced_gradient(ctx, x, *g);
      if (trial.area <= cur.area + 1e-4 * t * slope + roundoff) {
        accepted = true;
        next = std::move(x);
      }
    }
    if (!accepted) break;

    std::vector<double> s(next), y(trial.grad);
    axpy(-1.0, rho, s);
    axpy(-1.0, cur.grad, y);
    if (dot_vec(s, y) > 0.0) {
      pairs.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(pairs.size()) > cfg.history) pairs.pop_front();
    }
    rho = std::move(next);
    cur = std::move(trial);
    ++rep.iterations;
    rep.area_history.push_back(cur.area);
  }

  rep.surface = {initial.n_theta, rho};
  rep.converged = cur.stationarity <= cfg.grad_tol;
  rep.stationarity = cur.stationarity;
  rep.area = cur.area;
  rep.volume = volume_in(ctx.q, rho, *g);
  const CurvatureField H = curvature_in(ctx, rho, *g);
  rep.mean_H = H.mean;
  rep.cmc_deviation = H.deviation;
  if (std::holds_alternative<SchwarzschildSelector>(sel)) {
    rep.matched_r = radius_for_volume(m, target_V);
    rep.profile_area = profile_area(m, target_V);
  } else {
    rep.matched_r = matched_radius(*g, target_V, ctx.q);
  }
  for (double r : rho) rep.centering = std::max(rep.centering, std::abs(r - rep.matched_r) / rep.matched_r);
  return rep;
}

}  // namespace brayiso
