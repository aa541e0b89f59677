#pragma once

// Product quadrature on S^2 (Gauss-Legendre in cos(theta), uniform in phi) and
// a spherical-harmonic transform on it, used for spectral derivatives of
// radial graphs.

#include <cstddef>
#include <span>
#include <vector>

#include "brayiso/vec3.hpp"

namespace brayiso {

struct SurfaceQuadrature {
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> cos_theta;  // ascending GL nodes, size n_theta
  std::vector<double> sin_theta;
  std::vector<double> theta_weights;
  std::vector<double> phi;        // 2 pi j / n_phi
  std::vector<Vec3> nodes;        // unit directions, index i * n_phi + j
  std::vector<double> weights;    // theta_weights[i] * 2 pi / n_phi, sum 4 pi

  std::size_t size() const { return nodes.size(); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_phi + j; }
  Vec3 e_theta(int i, int j) const;
  Vec3 e_phi(int j) const;

  /// Half resolution in both directions (for error estimates).
  SurfaceQuadrature coarse() const;
  SurfaceQuadrature refined() const;
};

/// n_phi = 0 selects 2 * n_theta.
SurfaceQuadrature make_surface_quadrature(int n_theta, int n_phi = 0);

/// Right-handed orthonormal frame whose third vector is axis / |axis|.
struct Frame {
  Vec3 e1, e2, e3;
  Vec3 to_world(Vec3 local) const { return local.x * e1 + local.y * e2 + local.z * e3; }
};
Frame frame_along(Vec3 axis);

enum class Deriv { value, theta, phi, theta_theta, theta_phi, phi_phi };

/// Real spherical-harmonic transform with band limit n_theta - 1 on a grid with
/// n_phi >= 2 n_theta. Associated Legendre functions are normalized to unit
/// L^2 norm on [-1, 1].
class SphericalTransform {
 public:
  struct Coeffs {
    int band_limit = 0;
    std::vector<double> a;  // cos(m phi) part, packed by (m, l)
    std::vector<double> b;  // sin(m phi) part
  };

  explicit SphericalTransform(const SurfaceQuadrature& grid);

  int band_limit() const { return L_; }
  const SurfaceQuadrature& grid() const { return grid_; }

  Coeffs analyze(std::span<const double> f) const;
  /// Evaluates the expansion (or one of its derivatives) on any product grid.
  std::vector<double> synthesize(const Coeffs& c, const SurfaceQuadrature& target, Deriv d) const;

  /// synthesize(analyze(f), grid(), d) and its transpose, for gradients.
  std::vector<double> apply(std::span<const double> f, Deriv d) const;
  std::vector<double> apply_transpose(std::span<const double> g, Deriv d) const;

 private:
  std::size_t packed(int m, int l) const;
  int L_;
  SurfaceQuadrature grid_;
  std::vector<std::size_t> offset_;
  std::vector<double> tables_[3];  // value, d/dtheta, d2/dtheta2 at the grid rings
  std::vector<double> cos_, sin_;  // cos(m phi_j), sin(m phi_j), index m * n_phi + j
};

/// Normalized associated Legendre values and theta-derivatives at x = cos(theta),
/// packed as offset(m) + (l - m) for 0 <= m <= l <= L.
void legendre_tables(int L, double x, double* value, double* dtheta, double* dtheta2);

}  // namespace brayiso
