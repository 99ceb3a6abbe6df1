#include "curvlab/bundle.hpp"

#include <Eigen/Dense>
#include <sstream>
#include <stdexcept>

namespace curvlab {

namespace {

Quaternion block1(const Vec& p) { return Quaternion::from_block(p.segment(0, 4)); }
Quaternion block2(const Vec& p) { return Quaternion::from_block(p.segment(4, 4)); }

class HopfBundle final : public Bundle {
 public:
  HopfBundle()
      : Bundle("hopf", SphereProduct({{0, 8, 1.0}}, 8), SphereProduct({{0, 5, 0.5}}, 5)) {}

  Vec act(const Quaternion& g, const Vec& p) const override {
    Vec q(8);
    q.segment(0, 4) = (g * block1(p)).to_block();
    q.segment(4, 4) = (g * block2(p)).to_block();
    return q;
  }

  Vec action_vector_unchecked(const Vec& p, const AlgebraVector& u) const override {
    const Quaternion qu = Quaternion::pure(u);
    Vec v(8);
    v.segment(0, 4) = (qu * block1(p)).to_block();
    v.segment(4, 4) = (qu * block2(p)).to_block();
    return v;
  }

  // Quaternionic Hopf map onto the radius-1/2 sphere; invariant under the
  // left action since p1* g* g p2 = p1* p2.
  Vec project(const Vec& p) const override {
    const Quaternion p1 = block1(p), p2 = block2(p);
    Vec b(5);
    b[0] = 0.5 * (dot(p1, p1) - dot(p2, p2));
    b.segment(1, 4) = (p1.conjugate() * p2).to_block();
    return b;
  }

  Vec dpi(const Vec& p, const Vec& v) const override {
    const Quaternion p1 = block1(p), p2 = block2(p);
    const Quaternion v1 = block1(v), v2 = block2(v);
    Vec b(5);
    b[0] = dot(p1, v1) - dot(p2, v2);
    b.segment(1, 4) = (v1.conjugate() * p2 + p1.conjugate() * v2).to_block();
    return b;
  }

  double base_curvature_constant() const override { return 4.0; }
};

class TrivialBundle final : public Bundle {
 public:
  explicit TrivialBundle(int base_sphere_dim)
      : Bundle("trivial3x" + std::to_string(base_sphere_dim),
               SphereProduct({{0, 4, 1.0}, {4, base_sphere_dim + 1, 1.0}}, base_sphere_dim + 5),
               SphereProduct({{0, base_sphere_dim + 1, 1.0}}, base_sphere_dim + 1)),
        base_amb_(base_sphere_dim + 1) {}

  Vec act(const Quaternion& g, const Vec& p) const override {
    Vec q = p;
    q.segment(0, 4) = (g * block1(p)).to_block();
    return q;
  }

  Vec action_vector_unchecked(const Vec& p, const AlgebraVector& u) const override {
    Vec v = Vec::Zero(p.size());
    v.segment(0, 4) = (Quaternion::pure(u) * block1(p)).to_block();
    return v;
  }

  Vec project(const Vec& p) const override { return p.segment(4, base_amb_); }
  Vec dpi(const Vec&, const Vec& v) const override { return v.segment(4, base_amb_); }
  double base_curvature_constant() const override { return 1.0; }

 private:
  Eigen::Index base_amb_;
};

}  // namespace

Vec Bundle::action_vector(const Vec& p, const AlgebraVector& u) const {
  total_.require_point(p, 1e-8);
  return action_vector_unchecked(p, u);
}

Mat Bundle::action_frame(const Vec& p) const {
  Mat A(total_.ambient_dim(), 3);
  for (int i = 0; i < 3; ++i)
    A.col(i) = action_vector_unchecked(p, AlgebraVector::Unit(i));
  return A;
}

Mat Bundle::vertical_projector(const Vec& p) const {
  const Mat A = action_frame(p);
  return A * (A.transpose() * A).ldlt().solve(A.transpose());
}

Mat Bundle::horizontal_projector(const Vec& p) const {
  const Eigen::Index n = total_.ambient_dim();
  Mat T = Mat::Identity(n, n);
  for (const auto& f : total_.factors()) {
    Vec nr = p.segment(f.offset, f.size) / f.radius;
    T.block(f.offset, f.offset, f.size, f.size) -= nr * nr.transpose();
  }
  return T - vertical_projector(p);
}

Vec Bundle::vertical_part(const Vec& p, const Vec& v) const {
  const Mat A = action_frame(p);
  return A * (A.transpose() * A).ldlt().solve(A.transpose() * v);
}

Vec Bundle::horizontal_part(const Vec& p, const Vec& v) const {
  return total_.project_tangent(p, v) - vertical_part(p, v);
}

AlgebraVector Bundle::vert_to_algebra(const Vec& p, const Vec& V) const {
  const Mat A = action_frame(p);
  return (A.transpose() * A).ldlt().solve(A.transpose() * V);
}

Mat Bundle::vertical_basis(const Vec& p, const MetricField& m) const {
  return gram_schmidt(m, p, action_frame(p), 3);
}

Mat Bundle::horizontal_basis(const Vec& p, const MetricField& m) const {
  const Mat cand = horizontal_projector(p) * total_.tangent_basis(p);
  return gram_schmidt(m, p, cand, total_dim() - 3);
}

Vec Bundle::horizontal_lift(const Vec& base_pt, const Vec& base_vec, const Vec& p) const {
  if (base_vec.size() != base_.ambient_dim())
    throw std::invalid_argument("horizontal lift: base vector has wrong dimension");
  if ((project(p) - base_pt).norm() > 1e-6)
    throw std::invalid_argument("horizontal lift: point does not project to the base point");
  const MetricField ref = reference_metric();
  const Mat H = horizontal_basis(p, ref);
  Mat M(base_.ambient_dim(), H.cols());
  for (Eigen::Index j = 0; j < H.cols(); ++j) M.col(j) = dpi(p, H.col(j));
  const Vec c = (M.transpose() * M).ldlt().solve(M.transpose() * base_vec);
  const Vec lift = H * c;
  if ((M * c - base_.project_tangent(base_pt, base_vec)).norm() > 1e-8)
    throw std::invalid_argument("horizontal lift: base vector not attained");
  return lift;
}

Vec Bundle::basic_extension(const Vec& p, const Vec& X, const Vec& q) const {
  const Vec b0 = project(p);
  Chart chart(base_, b0);
  const Vec comps = chart.frame().transpose() * dpi(p, X);
  const Vec bq = project(q);
  const Vec y = chart.coords_of(bq);
  const Vec field_val = chart.vector_ambient(y, comps);
  return horizontal_lift(bq, field_val, q);
}

Mat gram_schmidt(const MetricField& m, const Vec& p, const Mat& candidates, int want) {
  const Mat G = m.gram(p);
  Mat out(candidates.rows(), want);
  std::vector<bool> used(candidates.cols(), false);
  int have = 0;
  while (have < want) {
    int best = -1;
    double best_norm = 1e-10;
    Vec best_vec;
    for (Eigen::Index j = 0; j < candidates.cols(); ++j) {
      if (used[j]) continue;
      Vec v = candidates.col(j);
      for (int k = 0; k < have; ++k) v -= out.col(k) * out.col(k).dot(G * v);
      const double n = std::sqrt(std::max(0.0, v.dot(G * v)));
      if (n > best_norm) {
        best_norm = n;
        best = static_cast<int>(j);
        best_vec = v / n;
      }
    }
    if (best < 0) throw std::runtime_error("gram_schmidt: candidate frame is rank deficient");
    used[best] = true;
    out.col(have++) = best_vec;
  }
  return out;
}

std::shared_ptr<const Bundle> make_bundle(const std::string& name) {
  if (name == "hopf") return std::make_shared<HopfBundle>();
  if (name == "trivial3x2") return std::make_shared<TrivialBundle>(2);
  if (name == "trivial3x4") return std::make_shared<TrivialBundle>(4);
  std::ostringstream os;
  os << "unknown bundle '" << name << "'; available:";
  for (const auto& n : bundle_names()) os << ' ' << n;
  throw std::invalid_argument(os.str());
}

std::vector<std::string> bundle_names() { return {"hopf", "trivial3x2", "trivial3x4"}; }

}  // namespace curvlab
