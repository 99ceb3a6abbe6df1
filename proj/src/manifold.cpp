#include "curvlab/manifold.hpp"

#include <Eigen/Dense>
#include <sstream>
#include <stdexcept>

namespace curvlab {

SphereProduct::SphereProduct(std::vector<SphereFactor> factors, Eigen::Index ambient_dim)
    : factors_(std::move(factors)), ambient_(ambient_dim) {
  Eigen::Index covered = 0;
  dim_ = 0;
  for (const auto& f : factors_) {
    if (f.size < 2 || f.radius <= 0.0) throw std::invalid_argument("bad sphere factor");
    covered += f.size;
    dim_ += static_cast<int>(f.size) - 1;
  }
  if (covered != ambient_) throw std::invalid_argument("factor blocks must tile the ambient space");
}

double SphereProduct::constraint_violation(const Vec& p) const {
  double worst = 0.0;
  for (const auto& f : factors_)
    worst = std::max(worst, std::abs(p.segment(f.offset, f.size).norm() - f.radius));
  return worst;
}

void SphereProduct::require_point(const Vec& p, double tol) const {
  if (p.size() != ambient_) throw std::invalid_argument("point has wrong ambient dimension");
  const double v = constraint_violation(p);
  if (v > tol) {
    std::ostringstream os;
    os << "point violates the embedding constraint by " << v;
    throw std::invalid_argument(os.str());
  }
}

Vec SphereProduct::retract(const Vec& p, const Vec& v) const {
  Vec q(ambient_);
  for (const auto& f : factors_) {
    Vec w = p.segment(f.offset, f.size) + v.segment(f.offset, f.size);
    const double n = w.norm();
    if (n == 0.0) throw std::invalid_argument("retraction through the origin of a factor");
    q.segment(f.offset, f.size) = (f.radius / n) * w;
  }
  return q;
}

Vec SphereProduct::project_tangent(const Vec& p, const Vec& w) const {
  Vec out = w;
  for (const auto& f : factors_) {
    Vec n = p.segment(f.offset, f.size) / f.radius;
    out.segment(f.offset, f.size) -= n * n.dot(w.segment(f.offset, f.size));
  }
  return out;
}

Mat SphereProduct::tangent_basis(const Vec& p) const {
  Mat basis = Mat::Zero(ambient_, dim_);
  Eigen::Index col = 0;
  for (const auto& f : factors_) {
    // Householder frame: reflect e1 onto the unit radial direction; the
    // remaining columns of the reflection span the tangent space of the factor.
    Vec n = p.segment(f.offset, f.size) / p.segment(f.offset, f.size).norm();
    Vec u = n;
    u[0] += (n[0] >= 0.0 ? 1.0 : -1.0);
    const double s = 2.0 / u.squaredNorm();
    for (Eigen::Index j = 1; j < f.size; ++j) {
      Vec e = -s * u[j] * u;
      e[j] += 1.0;
      basis.block(f.offset, col, f.size, 1) = e;
      ++col;
    }
  }
  return basis;
}

Chart::Chart(const SphereProduct& m, Vec center) : mfd_(&m), center_(std::move(center)) {
  mfd_->require_point(center_);
  frame_ = mfd_->tangent_basis(center_);
}

Vec Chart::point(const Vec& x) const { return mfd_->retract(center_, frame_ * x); }

Mat Chart::pushforward(const Vec& x) const {
  const Vec v = frame_ * x;
  Mat J(mfd_->ambient_dim(), dim());
  for (const auto& f : mfd_->factors()) {
    Vec w = center_.segment(f.offset, f.size) + v.segment(f.offset, f.size);
    const double n = w.norm();
    const Vec q = w / n;  // unit radial direction at the image point
    const double scale = f.radius / n;
    for (int j = 0; j < dim(); ++j) {
      Vec u = frame_.block(f.offset, j, f.size, 1);
      J.block(f.offset, j, f.size, 1) = scale * (u - q * q.dot(u));
    }
  }
  return J;
}

Vec Chart::coords_of(const Vec& q) const {
  Vec v(mfd_->ambient_dim());
  for (const auto& f : mfd_->factors()) {
    const Vec qf = q.segment(f.offset, f.size);
    const Vec cf = center_.segment(f.offset, f.size);
    const double inner = qf.dot(cf);
    if (inner <= 0.0)
      throw std::invalid_argument("point outside the chart hemisphere");
    v.segment(f.offset, f.size) = (f.radius * f.radius / inner) * qf - cf;
  }
  return frame_.transpose() * v;
}

Vec Chart::vector_coords(const Vec& x, const Vec& ambient) const {
  if (x.isZero(0.0)) return frame_.transpose() * ambient;
  const Mat J = pushforward(x);
  return (J.transpose() * J).ldlt().solve(J.transpose() * ambient);
}

Vec Chart::vector_ambient(const Vec& x, const Vec& comps) const {
  if (x.isZero(0.0)) return frame_ * comps;
  return pushforward(x) * comps;
}

}  // namespace curvlab
