#pragma once

#include <memory>
#include <string>
#include <vector>

#include "curvlab/lie.hpp"
#include "curvlab/manifold.hpp"
#include "curvlab/metric.hpp"

namespace curvlab {

/// A concrete S^3-principal bundle: embedded total space, free isometric
/// group action, base projection, and the reference submersion metric.
///
/// Shipped instances (see make_bundle):
///   hopf        S^3 acting on S^7 in H^2 by left multiplication; base is the
///               quotient 4-sphere, embedded with radius 1/2 so that the base
///               projection is a Riemannian submersion for identity Grams.
///   trivial3x2  S^3 x S^2 with the product round metric, action on the factor.
///   trivial3x4  S^3 x S^4 likewise (4-dimensional base, flat A tensor).
class Bundle {
 public:
  virtual ~Bundle() = default;

  const std::string& name() const { return name_; }
  const SphereProduct& total() const { return total_; }
  const SphereProduct& base() const { return base_; }
  int total_dim() const { return total_.dim(); }
  int base_dim() const { return base_.dim(); }
  int fiber_dim() const { return 3; }

  virtual Vec act(const Quaternion& g, const Vec& p) const = 0;

  /// Action vector u*(p) = d/dt|_0 Exp(tu) . p.
  virtual Vec action_vector_unchecked(const Vec& p, const AlgebraVector& u) const = 0;
  Vec action_vector(const Vec& p, const AlgebraVector& u) const;

  /// Bundle projection pi and its differential (both exact).
  virtual Vec project(const Vec& p) const = 0;
  virtual Vec dpi(const Vec& p, const Vec& v) const = 0;

  /// Reduced sectional curvature of the base of the reference metric.
  virtual double base_curvature_constant() const = 0;

  MetricField reference_metric() const { return MetricField::reference(&total_); }
  MetricField base_metric() const { return MetricField::reference(&base_); }

  /// Columns (e1*, e2*, e3*) of action vectors of the Q-orthonormal basis.
  Mat action_frame(const Vec& p) const;

  /// Euclidean == reference-metric orthogonal projectors onto the vertical
  /// span and its tangent complement. Inputs are assumed tangent.
  Mat vertical_projector(const Vec& p) const;
  Mat horizontal_projector(const Vec& p) const;
  Vec vertical_part(const Vec& p, const Vec& v) const;
  Vec horizontal_part(const Vec& p, const Vec& v) const;

  /// The algebra element u with u*(p) = V for vertical V (least squares).
  AlgebraVector vert_to_algebra(const Vec& p, const Vec& V) const;

  /// m-orthonormal bases of the vertical / horizontal space at p.
  Mat vertical_basis(const Vec& p, const MetricField& m) const;
  Mat horizontal_basis(const Vec& p, const MetricField& m) const;

  /// Unique horizontal vector at p with dpi = base_vec; pi(p) must be base_pt.
  Vec horizontal_lift(const Vec& base_pt, const Vec& base_vec, const Vec& p) const;

  /// Value at q of the basic extension of the horizontal vector X at p:
  /// the horizontal lift of the base extension of dpi(X). Metric independent.
  Vec basic_extension(const Vec& p, const Vec& X, const Vec& q) const;

 protected:
  Bundle(std::string name, SphereProduct total, SphereProduct base)
      : name_(std::move(name)), total_(std::move(total)), base_(std::move(base)) {}

  std::string name_;
  SphereProduct total_;
  SphereProduct base_;
};

std::shared_ptr<const Bundle> make_bundle(const std::string& name);
std::vector<std::string> bundle_names();

/// m-orthonormalize the columns of a candidate frame at p, largest norm first.
Mat gram_schmidt(const MetricField& m, const Vec& p, const Mat& candidates, int want);

}  // namespace curvlab
