#pragma once

#include <array>
#include <cmath>

namespace brayiso {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend Vec3 operator*(Vec3 a, double s) { return s * a; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Symmetric 3x3 matrix, row-major.
struct Mat3 {
  std::array<double, 9> a{};

  static Mat3 scalar(double s) {
    Mat3 m;
    m.a[0] = m.a[4] = m.a[8] = s;
    return m;
  }
  static Mat3 outer(Vec3 u, Vec3 v) {
    return Mat3{{u.x * v.x, u.x * v.y, u.x * v.z, u.y * v.x, u.y * v.y, u.y * v.z,
                 u.z * v.x, u.z * v.y, u.z * v.z}};
  }
  double operator()(int i, int j) const { return a[3 * i + j]; }
  friend Mat3 operator+(const Mat3& p, const Mat3& q) {
    Mat3 m;
    for (int i = 0; i < 9; ++i) m.a[i] = p.a[i] + q.a[i];
    return m;
  }
  friend Mat3 operator*(double s, const Mat3& p) {
    Mat3 m;
    for (int i = 0; i < 9; ++i) m.a[i] = s * p.a[i];
    return m;
  }
};

inline Vec3 operator*(const Mat3& m, Vec3 v) {
  return {m.a[0] * v.x + m.a[1] * v.y + m.a[2] * v.z,
          m.a[3] * v.x + m.a[4] * v.y + m.a[5] * v.z,
          m.a[6] * v.x + m.a[7] * v.y + m.a[8] * v.z};
}

// u^T M v
inline double form(const Mat3& m, Vec3 u, Vec3 v) { return dot(u, m * v); }

inline double det(const Mat3& m) {
  return m.a[0] * (m.a[4] * m.a[8] - m.a[5] * m.a[7]) -
         m.a[1] * (m.a[3] * m.a[8] - m.a[5] * m.a[6]) +
         m.a[2] * (m.a[3] * m.a[7] - m.a[4] * m.a[6]);
}

}  // namespace brayiso
