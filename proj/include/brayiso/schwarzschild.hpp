#pragma once

// Exact geometry of the time-symmetric Schwarzschild slice in isotropic
// coordinates: g_m = phi^4 delta with phi = 1 + m / (2 r).

#include "brayiso/quadrature.hpp"

namespace brayiso {

/// Schwarzschild mass. Positive by construction; the flat case m = 0 exists
/// only through euclidean_sanity() and serves as a test oracle.
class MassParam {
 public:
  explicit MassParam(double m);
  static MassParam euclidean_sanity();

  double value() const { return m_; }
  double horizon_radius() const { return 0.5 * m_; }
  bool is_euclidean() const { return m_ == 0.0; }

  friend bool operator==(const MassParam&, const MassParam&) = default;

 private:
  struct Flat {};
  explicit MassParam(Flat) : m_(0.0) {}
  double m_;
};

/// Snapshot of the centered sphere S_r.
struct ProfilePoint {
  double r = 0.0;
  double volume = 0.0;          // horizon-relative volume enclosed by S_r
  double area = 0.0;
  double mean_curvature = 0.0;
  double volume_radius = 0.0;   // (3 V / 4 pi)^(1/3)
};

double conformal_factor(MassParam m, double r);
double sphere_area(MassParam m, double r);
double sphere_mean_curvature(MassParam m, double r);

/// (16 pi)^(-3/2) sqrt(area) (16 pi - willmore), where willmore = int H^2.
double hawking_mass(double area, double willmore);

/// Volume between the horizon S_{m/2} and S_r. The closed form is authoritative;
/// QuadratureSpec::Rule::adaptive evaluates the defining integral instead.
double volume_to(MassParam m, double r, const QuadratureSpec& q = {});

/// d volume_to / dr = 4 pi phi^6 r^2.
double volume_density(MassParam m, double r);

/// Inverse of volume_to; bracketed Newton seeded with the Euclidean radius.
double radius_for_volume(MassParam m, double volume);

/// A_m(V): area of the centered sphere enclosing horizon-relative volume V.
double profile_area(MassParam m, double volume);

/// dA_m/dV, which equals the mean curvature of the enclosing centered sphere.
double profile_area_derivative(MassParam m, double volume);

/// area / ((36 pi)^(1/3) V^(2/3)) for S_r.
double isoperimetric_ratio(MassParam m, double r);

ProfilePoint profile_point(MassParam m, double r);

}  // namespace brayiso
