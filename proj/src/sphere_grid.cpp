#include "brayiso/sphere_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "brayiso/errors.hpp"
#include "brayiso/quadrature.hpp"

namespace brayiso {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t packed_size(int L) { return static_cast<std::size_t>(L + 1) * (L + 2) / 2; }
std::size_t packed_offset(int L, int m) {
  return static_cast<std::size_t>(m) * (L + 1) - static_cast<std::size_t>(m) * (m - 1) / 2;
}

struct Orders {
  int theta;
  int phi;
};

Orders orders(Deriv d) {
  switch (d) {
    case Deriv::value: return {0, 0};
    case Deriv::theta: return {1, 0};
    case Deriv::phi: return {0, 1};
    case Deriv::theta_theta: return {2, 0};
    case Deriv::theta_phi: return {1, 1};
    case Deriv::phi_phi: return {0, 2};
  }
  throw std::logic_error("unknown derivative");
}

void trig_tables(int L, const std::vector<double>& phi, std::vector<double>& c, std::vector<double>& s) {
  const std::size_t n = phi.size();
  c.assign(static_cast<std::size_t>(L + 1) * n, 0.0);
  s.assign(c.size(), 0.0);
  for (int m = 0; m <= L; ++m)
    for (std::size_t j = 0; j < n; ++j) {
      c[m * n + j] = std::cos(m * phi[j]);
      s[m * n + j] = std::sin(m * phi[j]);
    }
}

// Sums sum_l T_{ml} coeff_{ml} for one ring and writes the azimuthal synthesis
// of order p into out[0 .. n_phi).
void synthesize_ring(int L, const double* table, const SphericalTransform::Coeffs& c, int p,
                     const std::vector<double>& cs, const std::vector<double>& sn, std::size_t n_phi,
                     double* out) {
  for (std::size_t j = 0; j < n_phi; ++j) out[j] = 0.0;
  for (int m = 0; m <= L; ++m) {
    const std::size_t off = packed_offset(L, m);
    double A = 0.0, B = 0.0;
    for (int l = m; l <= L; ++l) {
      A += table[off + l - m] * c.a[off + l - m];
      B += table[off + l - m] * c.b[off + l - m];
    }
    const double* cm = &cs[m * n_phi];
    const double* sm = &sn[m * n_phi];
    const double mm = m;
    for (std::size_t j = 0; j < n_phi; ++j) {
      switch (p) {
        case 0: out[j] += A * cm[j] + B * sm[j]; break;
        case 1: out[j] += mm * (B * cm[j] - A * sm[j]); break;
        default: out[j] -= mm * mm * (A * cm[j] + B * sm[j]); break;
      }
    }
  }
}

}  // namespace

Vec3 SurfaceQuadrature::e_theta(int i, int j) const {
  const double c = cos_theta[i], s = sin_theta[i];
  return {c * std::cos(phi[j]), c * std::sin(phi[j]), -s};
}

Vec3 SurfaceQuadrature::e_phi(int j) const { return {-std::sin(phi[j]), std::cos(phi[j]), 0.0}; }

SurfaceQuadrature SurfaceQuadrature::coarse() const {
  return make_surface_quadrature(std::max(n_theta / 2, 2), std::max(n_phi / 2, 4));
}

SurfaceQuadrature SurfaceQuadrature::refined() const {
  return make_surface_quadrature(2 * n_theta, 2 * n_phi);
}

SurfaceQuadrature make_surface_quadrature(int n_theta, int n_phi) {
  require_domain(n_theta >= 2, "surface quadrature needs n_theta >= 2");
  if (n_phi == 0) n_phi = 2 * n_theta;
  require_domain(n_phi >= 4, "surface quadrature needs n_phi >= 4");
  const GaussLegendre& gl = gauss_legendre(static_cast<std::size_t>(n_theta));
  SurfaceQuadrature q;
  q.n_theta = n_theta;
  q.n_phi = n_phi;
  q.cos_theta = gl.nodes;
  q.theta_weights = gl.weights;
  for (double x : gl.nodes) q.sin_theta.push_back(std::sqrt((1.0 - x) * (1.0 + x)));
  for (int j = 0; j < n_phi; ++j) q.phi.push_back(kTwoPi * j / n_phi);
  q.nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  q.weights.reserve(q.nodes.capacity());
  for (int i = 0; i < n_theta; ++i)
    for (int j = 0; j < n_phi; ++j) {
      const double s = q.sin_theta[i];
      q.nodes.push_back({s * std::cos(q.phi[j]), s * std::sin(q.phi[j]), q.cos_theta[i]});
      q.weights.push_back(q.theta_weights[i] * kTwoPi / n_phi);
    }
  return q;
}

Frame frame_along(Vec3 axis) {
  const double n = norm(axis);
  require_domain(n > 0.0, "frame axis must be nonzero");
  Frame f;
  f.e3 = (1.0 / n) * axis;
  Vec3 h = std::abs(f.e3.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  h = h - dot(h, f.e3) * f.e3;
  f.e1 = (1.0 / norm(h)) * h;
  f.e2 = cross(f.e3, f.e1);
  return f;
}

void legendre_tables(int L, double x, double* value, double* dtheta, double* dtheta2) {
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  double pmm = std::sqrt(0.5);
  for (int m = 0; m <= L; ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    const std::size_t off = packed_offset(L, m);
    double prev = 0.0, cur = pmm;
    for (int l = m; l <= L; ++l) {
      if (l == m + 1) {
        prev = cur;
        cur = std::sqrt(2.0 * m + 3.0) * x * pmm;
      } else if (l > m + 1) {
        const double a_l = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
        const double a_lm1 = std::sqrt((4.0 * (l - 1) * (l - 1) - 1.0) /
                                       (static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m));
        const double next = a_l * (x * cur - prev / a_lm1);
        prev = cur;
        cur = next;
      }
      const std::size_t k = off + l - m;
      value[k] = cur;
      if (dtheta || dtheta2) {
        const double lower = (l == m) ? 0.0 : prev;
        const double coef = std::sqrt((2.0 * l + 1.0) * (static_cast<double>(l) * l - static_cast<double>(m) * m) /
                                      (2.0 * l - 1.0));
        const double dt = (l * x * cur - coef * lower) / s;
        if (dtheta) dtheta[k] = dt;
        if (dtheta2) dtheta2[k] = -(x / s) * dt + (m * m / (s * s) - l * (l + 1.0)) * cur;
      }
    }
  }
}

SphericalTransform::SphericalTransform(const SurfaceQuadrature& grid) : L_(grid.n_theta - 1), grid_(grid) {
  require_domain(grid.n_phi >= 2 * grid.n_theta, "spectral transform needs n_phi >= 2 n_theta");
  const std::size_t np = packed_size(L_);
  for (int m = 0; m <= L_; ++m) offset_.push_back(packed_offset(L_, m));
  for (auto& t : tables_) t.assign(np * grid.n_theta, 0.0);
  for (int i = 0; i < grid.n_theta; ++i)
    legendre_tables(L_, grid.cos_theta[i], &tables_[0][i * np], &tables_[1][i * np], &tables_[2][i * np]);
  trig_tables(L_, grid.phi, cos_, sin_);
}

std::size_t SphericalTransform::packed(int m, int l) const { return offset_[m] + l - m; }

SphericalTransform::Coeffs SphericalTransform::analyze(std::span<const double> f) const {
  require_domain(f.size() == grid_.size(), "analyze: sample count does not match the grid");
  const std::size_t np = packed_size(L_), nphi = grid_.n_phi;
  Coeffs c{L_, std::vector<double>(np, 0.0), std::vector<double>(np, 0.0)};
  for (int i = 0; i < grid_.n_theta; ++i) {
    const double* ring = &f[i * nphi];
    const double* table = &tables_[0][i * np];
    for (int m = 0; m <= L_; ++m) {
      double fa = 0.0, fb = 0.0;
      for (std::size_t j = 0; j < nphi; ++j) {
        fa += ring[j] * cos_[m * nphi + j];
        fb += ring[j] * sin_[m * nphi + j];
      }
      const double gamma = (m == 0 ? 1.0 : 2.0) / static_cast<double>(nphi);
      fa *= gamma * grid_.theta_weights[i];
      fb *= gamma * grid_.theta_weights[i];
      for (int l = m; l <= L_; ++l) {
        c.a[packed(m, l)] += table[packed(m, l)] * fa;
        c.b[packed(m, l)] += table[packed(m, l)] * fb;
      }
    }
  }
  return c;
}

std::vector<double> SphericalTransform::synthesize(const Coeffs& c, const SurfaceQuadrature& target,
                                                   Deriv d) const {
  require_domain(c.band_limit == L_, "coefficient band limit does not match the transform");
  const auto [k, p] = orders(d);
  const std::size_t np = packed_size(L_), nphi = target.n_phi;
  std::vector<double> cs, sn;
  trig_tables(L_, target.phi, cs, sn);
  std::vector<double> t[3];
  for (auto& v : t) v.assign(np, 0.0);
  std::vector<double> out(target.size());
  for (int i = 0; i < target.n_theta; ++i) {
    legendre_tables(L_, target.cos_theta[i], t[0].data(), t[1].data(), t[2].data());
    synthesize_ring(L_, t[k].data(), c, p, cs, sn, nphi, &out[i * nphi]);
  }
  return out;
}

std::vector<double> SphericalTransform::apply(std::span<const double> f, Deriv d) const {
  const Coeffs c = analyze(f);
  const auto [k, p] = orders(d);
  const std::size_t np = packed_size(L_), nphi = grid_.n_phi;
  std::vector<double> out(grid_.size());
  for (int i = 0; i < grid_.n_theta; ++i)
    synthesize_ring(L_, &tables_[k][i * np], c, p, cos_, sin_, nphi, &out[i * nphi]);
  return out;
}

std::vector<double> SphericalTransform::apply_transpose(std::span<const double> g, Deriv d) const {
  require_domain(g.size() == grid_.size(), "apply_transpose: sample count does not match the grid");
  const auto [k, p] = orders(d);
  const std::size_t np = packed_size(L_), nphi = grid_.n_phi;

  // Transpose of the synthesis.
  Coeffs c{L_, std::vector<double>(np, 0.0), std::vector<double>(np, 0.0)};
  for (int i = 0; i < grid_.n_theta; ++i) {
    const double* ring = &g[i * nphi];
    const double* table = &tables_[k][i * np];
    for (int m = 0; m <= L_; ++m) {
      double ca = 0.0, cb = 0.0;
      const double* cm = &cos_[m * nphi];
      const double* sm = &sin_[m * nphi];
      for (std::size_t j = 0; j < nphi; ++j) {
        switch (p) {
          case 0: ca += ring[j] * cm[j]; cb += ring[j] * sm[j]; break;
          case 1: ca -= m * ring[j] * sm[j]; cb += m * ring[j] * cm[j]; break;
          default: ca -= m * m * ring[j] * cm[j]; cb -= m * m * ring[j] * sm[j]; break;
        }
      }
      for (int l = m; l <= L_; ++l) {
        c.a[packed(m, l)] += table[packed(m, l)] * ca;
        c.b[packed(m, l)] += table[packed(m, l)] * cb;
      }
    }
  }

  // Transpose of the analysis.
  std::vector<double> out(grid_.size(), 0.0);
  for (int i = 0; i < grid_.n_theta; ++i) {
    const double* table = &tables_[0][i * np];
    double* ring = &out[i * nphi];
    for (int m = 0; m <= L_; ++m) {
      double A = 0.0, B = 0.0;
      for (int l = m; l <= L_; ++l) {
        A += table[packed(m, l)] * c.a[packed(m, l)];
        B += table[packed(m, l)] * c.b[packed(m, l)];
      }
      const double gamma = (m == 0 ? 1.0 : 2.0) / static_cast<double>(nphi) * grid_.theta_weights[i];
      for (std::size_t j = 0; j < nphi; ++j)
        ring[j] += gamma * (A * cos_[m * nphi + j] + B * sin_[m * nphi + j]);
    }
  }
  return out;
}

}  // namespace brayiso
