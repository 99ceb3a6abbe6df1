#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace curvlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// One round-sphere factor of an embedded product manifold: the sphere of
/// radius `radius` inside the ambient coordinate block [offset, offset+size).
struct SphereFactor {
  Eigen::Index offset = 0;
  Eigen::Index size = 0;  // ambient block dimension; the factor is S^{size-1}
  double radius = 1.0;
};

/// Product of round spheres embedded in R^N. All charts are orthographic:
/// per factor, x maps to radius * normalize(p + v). The chart agrees with the
/// exponential map to first order, so chart-center Christoffel symbols of the
/// induced round metric vanish.
class SphereProduct {
 public:
  SphereProduct() = default;
  SphereProduct(std::vector<SphereFactor> factors, Eigen::Index ambient_dim);

  Eigen::Index ambient_dim() const { return ambient_; }
  int dim() const { return dim_; }
  const std::vector<SphereFactor>& factors() const { return factors_; }

  /// Max deviation of per-factor radii from the embedding constraint.
  double constraint_violation(const Vec& p) const;
  bool contains(const Vec& p, double tol = 1e-10) const { return constraint_violation(p) <= tol; }
  void require_point(const Vec& p, double tol = 1e-8) const;

  /// Per-factor orthographic retraction radius * normalize(p_f + v_f).
  Vec retract(const Vec& p, const Vec& v) const;

  /// Remove the per-factor radial components of an ambient vector.
  Vec project_tangent(const Vec& p, const Vec& w) const;

  /// Deterministic Euclidean-orthonormal basis of T_p, as N x dim columns.
  Mat tangent_basis(const Vec& p) const;

 private:
  std::vector<SphereFactor> factors_;
  Eigen::Index ambient_ = 0;
  int dim_ = 0;
};

/// Orthographic chart centered at a point; coordinates live in R^dim.
class Chart {
 public:
  Chart(const SphereProduct& m, Vec center);

  int dim() const { return static_cast<int>(frame_.cols()); }
  const Vec& center() const { return center_; }
  const Mat& frame() const { return frame_; }
  const SphereProduct& manifold() const { return *mfd_; }

  /// phi(x): the chart map into the manifold.
  Vec point(const Vec& x) const;

  /// d phi_x as an N x dim matrix (exact, no finite differences).
  Mat pushforward(const Vec& x) const;

  /// phi^{-1}(q); valid on the hemisphere of each factor around the center.
  Vec coords_of(const Vec& q) const;

  /// Chart components of an ambient vector tangent at phi(x).
  Vec vector_coords(const Vec& x, const Vec& ambient) const;

  /// Ambient vector from chart components at phi(x).
  Vec vector_ambient(const Vec& x, const Vec& comps) const;

 private:
  const SphereProduct* mfd_;
  Vec center_;
  Mat frame_;  // N x dim, Euclidean-orthonormal tangent basis at center
};

}  // namespace curvlab
