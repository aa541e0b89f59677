#pragma once

// Riemannian metrics on R^3 minus the horizon ball, in isotropic coordinates:
// Euclidean, Schwarzschild, Schwarzschild plus a C^0-asymptotic perturbation,
// and Bray's chart metrics pulled back to the exterior of S_r.

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "brayiso/chart.hpp"
#include "brayiso/schwarzschild.hpp"
#include "brayiso/vec3.hpp"

namespace brayiso {

class MetricField {
 public:
  virtual ~MetricField() = default;

  virtual Mat3 tensor(Vec3 x) const = 0;
  /// d/dt of tensor(t x / |x|) at t = |x|.
  virtual Mat3 radial_derivative(Vec3 x) const = 0;
  virtual double volume_density(Vec3 x) const;

  /// psi with g = psi^4 delta, for conformally flat metrics.
  virtual std::optional<double> conformal_factor(Vec3 /*x*/) const { return std::nullopt; }
  /// Euclidean gradient of log psi; domain error unless conformally flat.
  virtual Vec3 log_conformal_gradient(Vec3 x) const;

  /// Radius of the inner boundary (the horizon); 0 for R^3.
  virtual double horizon_radius() const { return 0.0; }
  /// Area of the inner boundary sphere.
  virtual double horizon_area() const;
  /// Integral of volume_density(t dir) t^2 over t in [horizon_radius, R].
  virtual double radial_volume(Vec3 dir, double R) const;
  /// Smallest |x| at which tensor() may be evaluated.
  virtual double domain_radius() const { return horizon_radius(); }
};

class EuclideanMetric final : public MetricField {
 public:
  Mat3 tensor(Vec3) const override { return Mat3::scalar(1.0); }
  Mat3 radial_derivative(Vec3) const override { return Mat3{}; }
  double volume_density(Vec3) const override { return 1.0; }
  std::optional<double> conformal_factor(Vec3) const override { return 1.0; }
  Vec3 log_conformal_gradient(Vec3) const override { return {}; }
  double horizon_area() const override { return 0.0; }
  double radial_volume(Vec3, double R) const override { return R * R * R / 3.0; }
};

class SchwarzschildMetric final : public MetricField {
 public:
  explicit SchwarzschildMetric(MassParam m) : m_(m) {}
  MassParam mass() const { return m_; }
  Mat3 tensor(Vec3 x) const override;
  Mat3 radial_derivative(Vec3 x) const override;
  double volume_density(Vec3 x) const override;
  std::optional<double> conformal_factor(Vec3 x) const override;
  Vec3 log_conformal_gradient(Vec3 x) const override;
  double horizon_radius() const override { return m_.horizon_radius(); }
  double horizon_area() const override;
  double radial_volume(Vec3 dir, double R) const override;

 private:
  double conformal_factor_value(Vec3 x) const;
  MassParam m_;
};

/// Real spherical harmonic in Schmidt semi-normalization (|Y| <= 1):
/// P_l^m(cos theta) cos(m phi) for m >= 0, P_l^|m| sin(|m| phi) for m < 0.
struct HarmonicMode {
  int l = 0;
  int m = 0;
  double coeff = 0.0;
};

double schmidt_harmonic(int l, int m, Vec3 unit);

/// h = C chi(r) Y(x / r) / r^2 T with T = delta (isotropic) or x x^T / r^2 (radial),
/// Y = sum coeff * harmonic, sum |coeff| <= 1, and chi a C^2 cutoff that ramps
/// up on [R_in, 2 R_in] and down on [R_out, 2 R_out].
struct PerturbationSpec {
  enum class Tensor { isotropic, radial };

  MassParam mass{1.0};
  double amplitude = 0.0;
  std::vector<HarmonicMode> modes;
  Tensor kind = Tensor::isotropic;
  double inner_cutoff = 1.0;
  double outer_cutoff = std::numeric_limits<double>::infinity();

  void validate() const;
  double angular(Vec3 unit) const;
  /// Tangential gradient of angular() on the unit sphere.
  Vec3 angular_gradient(Vec3 unit) const;
  double cutoff(double r) const;
  double cutoff_derivative(double r) const;
  /// C chi(r) / r^2 and its derivative.
  double radial_profile(double r) const;
  double radial_profile_derivative(double r) const;
  /// sup over r of chi(r) / r^2 (sampled).
  double profile_sup() const;
  PerturbationSpec negated() const;
  bool is_zero() const;
};

class PerturbedMetric final : public MetricField {
 public:
  explicit PerturbedMetric(PerturbationSpec spec);
  const PerturbationSpec& spec() const { return spec_; }
  Mat3 tensor(Vec3 x) const override;
  Mat3 radial_derivative(Vec3 x) const override;
  double volume_density(Vec3 x) const override;
  std::optional<double> conformal_factor(Vec3 x) const override;
  Vec3 log_conformal_gradient(Vec3 x) const override;
  double horizon_radius() const override { return spec_.mass.horizon_radius(); }
  double radial_volume(Vec3 dir, double R) const override;
  /// Integral of (volume_density - phi^6) t^2 over [horizon_radius, R] along dir.
  double radial_volume_excess(Vec3 dir, double R) const;
  /// volume_density - phi^6 at x.
  double volume_excess_density(Vec3 x) const;

 private:
  double excess_along(double y, double t) const;
  PerturbationSpec spec_;
};

/// Chart metrics pulled back to |x| >= r by the volume-preserving map
/// |x| -> s(|x|), angles fixed: G = A(r) xx^T/r^2 + B(r) (I - xx^T/r^2).
/// Frame::gmc gives u^{-2} ds^2 + u s^2 g_{S^2} (which coincides with g_m there);
/// Frame::flat gives the chart's Euclidean metric ds^2 + s^2 g_{S^2}.
class ChartMetric final : public MetricField {
 public:
  enum class Frame { gmc, flat };
  ChartMetric(ChartParams chart, Frame frame, std::optional<RadialProfile> w = std::nullopt);

  const ChartParams& chart() const { return chart_; }
  Frame frame() const { return frame_; }
  Mat3 tensor(Vec3 x) const override;
  Mat3 radial_derivative(Vec3 x) const override;
  double volume_density(Vec3 x) const override;
  double horizon_radius() const override { return chart_.m.horizon_radius(); }
  /// Area of the horizon's image {s_h} x S^2; needs the interior w profile.
  double horizon_area() const override;
  double radial_volume(Vec3 dir, double R) const override;
  double domain_radius() const override { return chart_.r; }

  /// u_c at the chart image of x.
  double u_at(Vec3 x) const;
  /// s_h from the interior solution; domain error without w.
  double horizon_chart_radius() const;

 private:
  void coefficients(double r, double& A, double& B) const;
  ChartParams chart_;
  Frame frame_;
  std::optional<double> s_horizon_;
};

struct EuclideanSelector {};
struct SchwarzschildSelector {
  MassParam m;
};
struct ChartSelector {
  ChartParams chart;
  std::optional<RadialProfile> w;
  ChartMetric::Frame frame = ChartMetric::Frame::gmc;
};
using MetricSelector = std::variant<EuclideanSelector, SchwarzschildSelector, ChartSelector, PerturbationSpec>;

std::shared_ptr<const MetricField> make_metric(const MetricSelector& sel);
std::string selector_name(const MetricSelector& sel);

}  // namespace brayiso
