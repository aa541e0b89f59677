#include "brayiso/schwarzschild.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "brayiso/errors.hpp"

namespace brayiso {

using std::numbers::pi;

MassParam::MassParam(double m) : m_(m) {
  require_domain(std::isfinite(m) && m > 0.0,
                 "mass must be positive (use MassParam::euclidean_sanity() for m = 0)");
}

MassParam MassParam::euclidean_sanity() { return MassParam(Flat{}); }

double conformal_factor(MassParam m, double r) {
  require_domain(r > 0.0, "isotropic radius must be positive");
  return 1.0 + m.value() / (2.0 * r);
}

double sphere_area(MassParam m, double r) {
  const double phi = conformal_factor(m, r);
  const double phi2 = phi * phi;
  return phi2 * phi2 * 4.0 * pi * r * r;
}

double sphere_mean_curvature(MassParam m, double r) {
  require_domain(r > 0.0 && r >= m.horizon_radius(),
                 "mean curvature is evaluated on or outside the horizon");
  const double phi = conformal_factor(m, r);
  return (1.0 - m.value() / (2.0 * r)) * 2.0 / (r * phi * phi * phi);
}

double hawking_mass(double area, double willmore) {
  require_domain(area > 0.0, "Hawking mass needs positive area");
  return std::pow(16.0 * pi, -1.5) * std::sqrt(area) * (16.0 * pi - willmore);
}

namespace {

// 4 pi int_a^r (1 + a/t)^6 t^2 dt with a = m/2, expanded binomially. Every
// term is a nonnegative difference, so there is no cancellation near r = a.
double volume_closed_form(double a, double r) {
  const double d1 = r - a;
  const double d2 = (r - a) * (r + a);
  const double d3 = d1 * (r * r + r * a + a * a);
  if (a == 0.0) return 4.0 * pi * r * r * r / 3.0;
  const double a2 = a * a;
  const double a3 = a2 * a;
  const double sum = d3 / 3.0 + 3.0 * a * d2 + 15.0 * a2 * d1 + 20.0 * a3 * std::log1p(d1 / a) +
                     15.0 * a3 * d1 / r + 3.0 * a3 * d2 / (r * r) +
                     a3 * d3 / (3.0 * r * r * r);
  return 4.0 * pi * sum;
}

}  // namespace

double volume_density(MassParam m, double r) {
  const double phi = conformal_factor(m, r);
  const double phi3 = phi * phi * phi;
  return 4.0 * pi * phi3 * phi3 * r * r;
}

double volume_to(MassParam m, double r, const QuadratureSpec& q) {
  q.validate();
  const double a = m.horizon_radius();
  require_domain(r >= a && r > 0.0, "volume_to needs r >= m/2");
  if (q.rule == QuadratureSpec::Rule::closed_form) return volume_closed_form(a, r);
  return integrate_adaptive([&](double t) { return volume_density(m, t); }, a, r, q).value;
}

double radius_for_volume(MassParam m, double volume) {
  require_domain(std::isfinite(volume) && volume > 0.0, "radius_for_volume needs V > 0");
  const double a = m.horizon_radius();
  // volume_to(r) >= 4 pi (r^3 - a^3) / 3 since phi >= 1, which brackets the root.
  const double lo = a;
  const double hi = std::cbrt(3.0 * volume / (4.0 * pi) + a * a * a);
  const double guess = std::clamp(std::cbrt(3.0 * volume / (4.0 * pi)), 0.5 * (lo + hi), hi);
  std::uintmax_t iters = 200;
  const double r = boost::math::tools::newton_raphson_iterate(
      [&](double t) { return std::make_pair(volume_to(m, t) - volume, volume_density(m, t)); }, guess, lo, hi,
      std::numeric_limits<double>::digits - 2, iters);
  const double residual = std::abs(volume_to(m, r) - volume);
  if (residual > 1e-12 * volume) {
    throw NumericError("radius_for_volume failed to converge (residual " +
                       std::to_string(residual) + ")");
  }
  return r;
}

double profile_area(MassParam m, double volume) {
  return sphere_area(m, radius_for_volume(m, volume));
}

double profile_area_derivative(MassParam m, double volume) {
  return sphere_mean_curvature(m, radius_for_volume(m, volume));
}

double isoperimetric_ratio(MassParam m, double r) {
  require_domain(r > m.horizon_radius(), "isoperimetric ratio needs r > m/2");
  const double v = volume_to(m, r);
  return sphere_area(m, r) / (std::cbrt(36.0 * pi) * std::pow(v, 2.0 / 3.0));
}

ProfilePoint profile_point(MassParam m, double r) {
  ProfilePoint p;
  p.r = r;
  p.volume = volume_to(m, r);
  p.area = sphere_area(m, r);
  p.mean_curvature = sphere_mean_curvature(m, r);
  p.volume_radius = std::cbrt(3.0 * p.volume / (4.0 * pi));
  return p;
}

}  // namespace brayiso
