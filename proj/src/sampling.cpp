#include "curvlab/sampling.hpp"

#include <stdexcept>

namespace curvlab {

namespace {

Vec gaussian_vec(Eigen::Index n, Pcg32& rng) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.gaussian();
  return v;
}

Vec normalize_in(const MetricField& m, const Vec& p, const Vec& v) {
  const double n = m.norm(p, v);
  if (n < 1e-9) throw std::runtime_error("degenerate sample");
  return v / n;
}

}  // namespace

Vec sample_point(const SphereProduct& mfd, Pcg32& rng) {
  Vec p(mfd.ambient_dim());
  for (const auto& f : mfd.factors()) {
    Vec block = gaussian_vec(f.size, rng);
    while (block.norm() < 1e-6) block = gaussian_vec(f.size, rng);
    p.segment(f.offset, f.size) = f.radius * block / block.norm();
  }
  return p;
}

AlgebraVector sample_unit_algebra(Pcg32& rng) {
  AlgebraVector u(rng.gaussian(), rng.gaussian(), rng.gaussian());
  while (u.norm() < 1e-6) u = AlgebraVector(rng.gaussian(), rng.gaussian(), rng.gaussian());
  return u.normalized();
}

Vec sample_unit_tangent(const SphereProduct& mfd, const MetricField& m, const Vec& p, Pcg32& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    const Vec v = mfd.project_tangent(p, gaussian_vec(mfd.ambient_dim(), rng));
    if (m.norm(p, v) > 1e-6) return normalize_in(m, p, v);
  }
  throw std::runtime_error("failed to sample a tangent vector");
}

Vec sample_unit_horizontal(const Bundle& b, const MetricField& m, const Vec& p, Pcg32& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    const Vec v = b.horizontal_part(p, gaussian_vec(b.total().ambient_dim(), rng));
    if (m.norm(p, v) > 1e-6) return normalize_in(m, p, v);
  }
  throw std::runtime_error("failed to sample a horizontal vector");
}

Vec sample_unit_vertical(const Bundle& b, const MetricField& m, const Vec& p, Pcg32& rng) {
  const Vec v = b.action_vector_unchecked(p, sample_unit_algebra(rng));
  return normalize_in(m, p, v);
}

std::pair<Vec, Vec> sample_horizontal_pair(const Bundle& b, const MetricField& m, const Vec& p,
                                           Pcg32& rng) {
  const Vec X = sample_unit_horizontal(b, m, p, rng);
  for (int attempt = 0; attempt < 16; ++attempt) {
    Vec Y = sample_unit_horizontal(b, m, p, rng);
    Y -= m.inner(p, X, Y) * X;
    if (m.norm(p, Y) > 1e-3) return {X, normalize_in(m, p, Y)};
  }
  throw std::runtime_error("failed to sample an orthonormal horizontal pair");
}

VertizontalFrame sample_frame(const Bundle& b, const MetricField& m, Pcg32& rng) {
  VertizontalFrame f;
  f.p = sample_point(b.total(), rng);
  auto [X, Y] = sample_horizontal_pair(b, m, f.p, rng);
  f.X = X;
  f.Y = Y;
  f.V = sample_unit_vertical(b, m, f.p, rng);
  f.u = b.vert_to_algebra(f.p, f.V);
  return f;
}

}  // namespace curvlab
