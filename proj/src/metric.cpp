#include "brayiso/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/legendre.hpp>

#include "brayiso/errors.hpp"
#include "brayiso/quadrature.hpp"
#include "brayiso/sphere_grid.hpp"

namespace brayiso {

namespace {

constexpr double kPi = std::numbers::pi;

Mat3 radial_tangential(Vec3 x, double A, double B) {
  const double r = norm(x);
  const Vec3 n = (1.0 / r) * x;
  return B * Mat3::scalar(1.0) + (A - B) * Mat3::outer(n, n);
}

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

// Integral of f(t) over [a, b] on geometric panels of ratio at most 2.
template <class F>
double integrate_geometric(F&& f, double a, double b) {
  if (b <= a) return 0.0;
  const GaussLegendre& rule = gauss_legendre(20);
  const int panels = std::max(1, static_cast<int>(std::ceil(std::log2(b / a))));
  const double ratio = std::pow(b / a, 1.0 / panels);
  double sum = 0.0, lo = a;
  for (int p = 0; p < panels; ++p) {
    const double hi = (p + 1 == panels) ? b : lo * ratio;
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * f(mid + half * rule.nodes[k]);
    sum += half * s;
    lo = hi;
  }
  return sum;
}

double sphere_area_in(const MetricField& g, double radius) {
  const SurfaceQuadrature q = make_surface_quadrature(32);
  double area = 0.0;
  for (int i = 0; i < q.n_theta; ++i)
    for (int j = 0; j < q.n_phi; ++j) {
      const std::size_t k = q.index(i, j);
      const Vec3 x = radius * q.nodes[k];
      const Vec3 xt = radius * q.e_theta(i, j);
      const Vec3 xp = radius * q.e_phi(j);
      const Mat3 G = g.tensor(x);
      const double E = form(G, xt, xt), F = form(G, xt, xp), Gp = form(G, xp, xp);
      area += q.weights[k] * std::sqrt(std::max(E * Gp - F * F, 0.0));
    }
  return area;
}

}  // namespace

double MetricField::volume_density(Vec3 x) const { return std::sqrt(det(tensor(x))); }

Vec3 MetricField::log_conformal_gradient(Vec3) const {
  throw std::domain_error("metric is not conformally flat");
}

double MetricField::horizon_area() const {
  const double h = horizon_radius();
  return h > 0.0 ? sphere_area_in(*this, h) : 0.0;
}

double MetricField::radial_volume(Vec3 dir, double R) const {
  const double h = horizon_radius();
  require_domain(R >= h, "radial_volume: R below the horizon");
  const Vec3 n = (1.0 / norm(dir)) * dir;
  auto f = [&](double t) { return volume_density(t * n) * t * t; };
  if (h > 0.0) return integrate_geometric(f, h, R);
  return integrate_gl(f, 0.0, R, 40);
}

// Schwarzschild ---------------------------------------------------------------

Mat3 SchwarzschildMetric::tensor(Vec3 x) const {
  const double phi = conformal_factor_value(x);
  return Mat3::scalar(phi * phi * phi * phi);
}

Mat3 SchwarzschildMetric::radial_derivative(Vec3 x) const {
  const double r = norm(x);
  const double phi = brayiso::conformal_factor(m_, r);
  const double dphi = -m_.value() / (2.0 * r * r);
  return Mat3::scalar(4.0 * phi * phi * phi * dphi);
}

double SchwarzschildMetric::volume_density(Vec3 x) const {
  const double phi = conformal_factor_value(x);
  return phi * phi * phi * phi * phi * phi;
}

std::optional<double> SchwarzschildMetric::conformal_factor(Vec3 x) const { return conformal_factor_value(x); }

double SchwarzschildMetric::conformal_factor_value(Vec3 x) const { return brayiso::conformal_factor(m_, norm(x)); }

Vec3 SchwarzschildMetric::log_conformal_gradient(Vec3 x) const {
  const double r = norm(x);
  const double phi = brayiso::conformal_factor(m_, r);
  return (-m_.value() / (2.0 * r * r * r * phi)) * x;
}

double SchwarzschildMetric::horizon_area() const { return 16.0 * kPi * m_.value() * m_.value(); }

double SchwarzschildMetric::radial_volume(Vec3, double R) const {
  require_domain(R >= horizon_radius(), "radial_volume: R below the horizon");
  return volume_to(m_, R) / (4.0 * kPi);
}

// Perturbation ----------------------------------------------------------------

double schmidt_harmonic(int l, int m, Vec3 unit) {
  require_domain(l >= 0 && std::abs(m) <= l, "harmonic needs |m| <= l");
  const double n = norm(unit);
  require_domain(n > 0.0, "harmonic needs a nonzero direction");
  const double x = std::clamp(unit.z / n, -1.0, 1.0);
  const int am = std::abs(m);
  // Boost includes the Condon-Shortley phase; remove it.
  double p = boost::math::legendre_p(l, am, x);
  if (am % 2 == 1) p = -p;
  const double norm_lm =
      std::sqrt((am == 0 ? 1.0 : 2.0) * std::exp(std::lgamma(l - am + 1.0) - std::lgamma(l + am + 1.0)));
  if (am == 0) return norm_lm * p;
  const double phi = std::atan2(unit.y, unit.x);
  return norm_lm * p * (m > 0 ? std::cos(am * phi) : std::sin(am * phi));
}

void PerturbationSpec::validate() const {
  require_domain(std::isfinite(amplitude), "perturbation amplitude must be finite");
  require_domain(inner_cutoff > 0.0, "inner cutoff must be positive");
  require_domain(outer_cutoff >= 2.0 * inner_cutoff, "outer cutoff must be at least twice the inner cutoff");
  double total = 0.0;
  for (const auto& mode : modes) {
    require_domain(mode.l >= 0 && std::abs(mode.m) <= mode.l, "harmonic mode needs |m| <= l");
    total += std::abs(mode.coeff);
  }
  require_domain(total <= 1.0 + 1e-12, "sum of |coeff| must not exceed 1");
  // phi^4 >= 1, so |h| < 1 keeps g positive definite.
  require_domain(std::abs(amplitude) * total * profile_sup() < 1.0,
                 "perturbation too large: metric would not be positive definite");
}

double PerturbationSpec::angular(Vec3 unit) const {
  double y = 0.0;
  for (const auto& mode : modes) y += mode.coeff * schmidt_harmonic(mode.l, mode.m, unit);
  return y;
}

Vec3 PerturbationSpec::angular_gradient(Vec3 unit) const {
  const Frame f = frame_along(unit);
  const double h = 1e-5;
  auto along = [&](Vec3 t) {
    const Vec3 plus = std::cos(h) * f.e3 + std::sin(h) * t;
    const Vec3 minus = std::cos(h) * f.e3 - std::sin(h) * t;
    return (angular(plus) - angular(minus)) / (2.0 * h);
  };
  return along(f.e1) * f.e1 + along(f.e2) * f.e2;
}

double PerturbationSpec::cutoff(double r) const {
  double chi = smoothstep((r - inner_cutoff) / inner_cutoff);
  if (std::isfinite(outer_cutoff)) chi *= 1.0 - smoothstep((r - outer_cutoff) / outer_cutoff);
  return chi;
}

double PerturbationSpec::cutoff_derivative(double r) const {
  const double in = smoothstep((r - inner_cutoff) / inner_cutoff);
  const double din = smoothstep_derivative((r - inner_cutoff) / inner_cutoff) / inner_cutoff;
  if (!std::isfinite(outer_cutoff)) return din;
  const double out = 1.0 - smoothstep((r - outer_cutoff) / outer_cutoff);
  const double dout = -smoothstep_derivative((r - outer_cutoff) / outer_cutoff) / outer_cutoff;
  return din * out + in * dout;
}

double PerturbationSpec::radial_profile(double r) const { return amplitude * cutoff(r) / (r * r); }

double PerturbationSpec::radial_profile_derivative(double r) const {
  return amplitude * (cutoff_derivative(r) / (r * r) - 2.0 * cutoff(r) / (r * r * r));
}

double PerturbationSpec::profile_sup() const {
  double sup = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double r = inner_cutoff * (1.0 + k / 1000.0);
    sup = std::max(sup, cutoff(r) / (r * r));
  }
  return 1.01 * sup;
}

PerturbationSpec PerturbationSpec::negated() const {
  PerturbationSpec p = *this;
  p.amplitude = -amplitude;
  return p;
}

bool PerturbationSpec::is_zero() const {
  if (amplitude == 0.0) return true;
  return std::all_of(modes.begin(), modes.end(), [](const HarmonicMode& m) { return m.coeff == 0.0; });
}

PerturbedMetric::PerturbedMetric(PerturbationSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

Mat3 PerturbedMetric::tensor(Vec3 x) const {
  const double r = norm(x);
  const double phi = brayiso::conformal_factor(spec_.mass, r);
  const double eps = spec_.radial_profile(r) * spec_.angular(x);
  const double p4 = phi * phi * phi * phi;
  if (spec_.kind == PerturbationSpec::Tensor::isotropic) return Mat3::scalar(p4 + eps);
  return radial_tangential(x, p4 + eps, p4);
}

Mat3 PerturbedMetric::radial_derivative(Vec3 x) const {
  const double r = norm(x);
  const double phi = brayiso::conformal_factor(spec_.mass, r);
  const double dp4 = 4.0 * phi * phi * phi * (-spec_.mass.value() / (2.0 * r * r));
  const double deps = spec_.radial_profile_derivative(r) * spec_.angular(x);
  if (spec_.kind == PerturbationSpec::Tensor::isotropic) return Mat3::scalar(dp4 + deps);
  return radial_tangential(x, dp4 + deps, dp4);
}

double PerturbedMetric::volume_density(Vec3 x) const {
  const double r = norm(x);
  const double phi = brayiso::conformal_factor(spec_.mass, r);
  const double p6 = std::pow(phi, 6);
  return p6 + excess_along(spec_.angular(x), r);
}

double PerturbedMetric::excess_along(double y, double t) const {
  const double eps = spec_.radial_profile(t) * y;
  if (eps == 0.0) return 0.0;
  const double phi = brayiso::conformal_factor(spec_.mass, t);
  const double p4 = phi * phi * phi * phi;
  const double e = eps / p4;
  const double power = spec_.kind == PerturbationSpec::Tensor::isotropic ? 1.5 : 0.5;
  return p4 * phi * phi * std::expm1(power * std::log1p(e));
}

double PerturbedMetric::volume_excess_density(Vec3 x) const { return excess_along(spec_.angular(x), norm(x)); }

double PerturbedMetric::radial_volume_excess(Vec3 dir, double R) const {
  require_domain(R >= horizon_radius(), "radial_volume: R below the horizon");
  const double y = spec_.angular(dir);
  if (y == 0.0 || spec_.amplitude == 0.0) return 0.0;
  const double lo = std::max(horizon_radius(), spec_.inner_cutoff);
  const double hi = std::min(R, std::isfinite(spec_.outer_cutoff) ? 2.0 * spec_.outer_cutoff : R);
  if (hi <= lo) return 0.0;
  std::vector<double> cuts{lo, hi};
  for (double b : {2.0 * spec_.inner_cutoff, spec_.outer_cutoff, 2.0 * spec_.outer_cutoff})
    if (std::isfinite(b) && b > lo && b < hi) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  auto f = [&](double t) { return excess_along(y, t) * t * t; };
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) sum += integrate_geometric(f, cuts[k], cuts[k + 1]);
  return sum;
}

double PerturbedMetric::radial_volume(Vec3 dir, double R) const {
  return volume_to(spec_.mass, R) / (4.0 * kPi) + radial_volume_excess(dir, R);
}

std::optional<double> PerturbedMetric::conformal_factor(Vec3 x) const {
  if (spec_.kind != PerturbationSpec::Tensor::isotropic) return std::nullopt;
  const double r = norm(x);
  const double phi = brayiso::conformal_factor(spec_.mass, r);
  return std::pow(phi * phi * phi * phi + spec_.radial_profile(r) * spec_.angular(x), 0.25);
}

Vec3 PerturbedMetric::log_conformal_gradient(Vec3 x) const {
  require_domain(spec_.kind == PerturbationSpec::Tensor::isotropic, "radial perturbations are not conformally flat");
  const double r = norm(x);
  const Vec3 n = (1.0 / r) * x;
  const double phi = brayiso::conformal_factor(spec_.mass, r);
  const double p4 = phi * phi * phi * phi;
  const double y = spec_.angular(n);
  const double f = spec_.radial_profile(r);
  const double dp4 = 4.0 * phi * phi * phi * (-spec_.mass.value() / (2.0 * r * r));
  const Vec3 grad = (dp4 + spec_.radial_profile_derivative(r) * y) * n + (f / r) * spec_.angular_gradient(n);
  return (1.0 / (4.0 * (p4 + f * y))) * grad;
}

// Chart -----------------------------------------------------------------------

ChartMetric::ChartMetric(ChartParams chart, Frame frame, std::optional<RadialProfile> w)
    : chart_(chart), frame_(frame) {
  if (w) {
    const InnerMinimum min = inner_area_minimum(chart_, *w);
    if (!min.conclusive) throw NumericError("w profile does not bracket the horizon");
    s_horizon_ = min.s_min;
  }
}

void ChartMetric::coefficients(double r, double& A, double& B) const {
  const double s = chart_radius(chart_, r);
  const double sp = brayiso::volume_density(chart_.m, r) / (4.0 * kPi * s * s);
  if (frame_ == Frame::flat) {
    A = sp * sp;
    B = s * s / (r * r);
    return;
  }
  const double u = u_profile(chart_, s);
  A = sp * sp / (u * u);
  B = u * s * s / (r * r);
}

Mat3 ChartMetric::tensor(Vec3 x) const {
  double A, B;
  coefficients(norm(x), A, B);
  return radial_tangential(x, A, B);
}

// Central difference in r; used only for diagnostics, never in gradients.
Mat3 ChartMetric::radial_derivative(Vec3 x) const {
  const double r = norm(x);
  const double h = 1e-6 * r;
  const double lo = std::max(r - h, chart_.r);
  const double hi = r + h;
  double A0, B0, A1, B1;
  coefficients(lo, A0, B0);
  coefficients(hi, A1, B1);
  return radial_tangential(x, (A1 - A0) / (hi - lo), (B1 - B0) / (hi - lo));
}

double ChartMetric::volume_density(Vec3 x) const {
  double A, B;
  coefficients(norm(x), A, B);
  return std::sqrt(A) * B;
}

double ChartMetric::horizon_chart_radius() const {
  require_domain(s_horizon_.has_value(), "chart horizon needs the interior w profile");
  return *s_horizon_;
}

double ChartMetric::horizon_area() const {
  const double s = horizon_chart_radius();
  const double area = 4.0 * kPi * s * s;
  return frame_ == Frame::flat ? area : chart_.alpha * area;
}

double ChartMetric::radial_volume(Vec3, double) const {
  throw std::domain_error("chart volumes need the interior map, which is not supported");
}

double ChartMetric::u_at(Vec3 x) const { return u_profile(chart_, chart_radius(chart_, norm(x))); }

std::shared_ptr<const MetricField> make_metric(const MetricSelector& sel) {
  struct Visitor {
    std::shared_ptr<const MetricField> operator()(const EuclideanSelector&) const {
      return std::make_shared<EuclideanMetric>();
    }
    std::shared_ptr<const MetricField> operator()(const SchwarzschildSelector& s) const {
      return std::make_shared<SchwarzschildMetric>(s.m);
    }
    std::shared_ptr<const MetricField> operator()(const ChartSelector& s) const {
      return std::make_shared<ChartMetric>(s.chart, s.frame, s.w);
    }
    std::shared_ptr<const MetricField> operator()(const PerturbationSpec& p) const {
      return std::make_shared<PerturbedMetric>(p);
    }
  };
  return std::visit(Visitor{}, sel);
}

std::string selector_name(const MetricSelector& sel) {
  switch (sel.index()) {
    case 0: return "euclidean";
    case 1: return "schwarzschild";
    case 2: return std::get<ChartSelector>(sel).frame == ChartMetric::Frame::flat ? "chart_flat" : "chart";
    default: return "perturbed";
  }
}

}  // namespace brayiso
