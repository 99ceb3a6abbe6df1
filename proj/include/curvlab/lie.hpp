#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace curvlab {

/// Element of the Lie algebra su(2) identified with Im H ~ R^3,
/// components ordered (i, j, k). The bi-invariant inner product Q is the
/// Euclidean dot product in this basis.
using AlgebraVector = Eigen::Vector3d;

/// Quaternion w + x i + y j + z k. Group elements are unit quaternions.
struct Quaternion {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  Quaternion() = default;
  Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

  /// Pure quaternion from an algebra vector.
  static Quaternion pure(const AlgebraVector& u) { return {0.0, u[0], u[1], u[2]}; }

  static Quaternion identity() { return {1.0, 0.0, 0.0, 0.0}; }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  Quaternion conjugate() const { return {w, -x, -y, -z}; }

  AlgebraVector imag() const { return AlgebraVector(x, y, z); }

  Quaternion normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero quaternion");
    return {w / n, x / n, y / n, z / n};
  }

  Quaternion operator*(const Quaternion& q) const {
    return {w * q.w - x * q.x - y * q.y - z * q.z,
            w * q.x + x * q.w + y * q.z - z * q.y,
            w * q.y - x * q.z + y * q.w + z * q.x,
            w * q.z + x * q.y - y * q.x + z * q.w};
  }
  Quaternion operator+(const Quaternion& q) const { return {w + q.w, x + q.x, y + q.y, z + q.z}; }
  Quaternion operator-(const Quaternion& q) const { return {w - q.w, x - q.x, y - q.y, z - q.z}; }
  Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }

  /// Quaternion from a length-4 ambient block (w, x, y, z).
  template <typename Derived>
  static Quaternion from_block(const Eigen::MatrixBase<Derived>& b) {
    return {b[0], b[1], b[2], b[3]};
  }
  Eigen::Vector4d to_block() const { return Eigen::Vector4d(w, x, y, z); }
};

inline double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Bi-invariant inner product Q on su(2).
inline double q_inner(const AlgebraVector& u, const AlgebraVector& v) { return u.dot(v); }

/// Lie bracket [u, v] = uv - vu in Im H; equals 2 (u x v) in components.
inline AlgebraVector bracket(const AlgebraVector& u, const AlgebraVector& v) {
  return 2.0 * u.cross(v);
}

/// Group exponential Exp(u) = cos|u| + sin|u| u/|u|, Exp(0) = 1.
inline Quaternion group_exp(const AlgebraVector& u) {
  const double r = u.norm();
  if (r < 1e-300) return Quaternion::identity();
  const double s = std::sin(r) / r;
  return {std::cos(r), s * u[0], s * u[1], s * u[2]};
}

/// Adjoint action Ad_g(v) = g v g^{-1}; requires |g| = 1.
inline AlgebraVector adjoint(const Quaternion& g, const AlgebraVector& v) {
  if (std::abs(g.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("group element not normalized");
  const Quaternion r = g * Quaternion::pure(v) * g.conjugate();
  return r.imag();
}

}  // namespace curvlab
