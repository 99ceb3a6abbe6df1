#include "curvlab/cheeger.hpp"

#include <Eigen/Dense>
#include <sstream>
#include <stdexcept>

namespace curvlab {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

Eigen::Matrix3d inv_one_plus_tp(const Eigen::Matrix3d& P, double t) {
  return (Eigen::Matrix3d::Identity() + t * P).inverse();
}

Eigen::Matrix3d inv_sqrt_one_plus_tp(const Eigen::Matrix3d& P, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(Eigen::Matrix3d::Identity() + t * P);
  return es.operatorInverseSqrt();
}

std::string compose_descriptor(const std::string& tag, const MetricField& m) {
  if (m.descriptor() == "reference") return tag;
  return tag + "|" + m.descriptor();
}

}  // namespace

Eigen::Matrix3d orbit_tensor(const Bundle& b, const MetricField& m, const Vec& p) {
  const Mat A = b.action_frame(p);
  Eigen::Matrix3d P = A.transpose() * m.gram(p) * A;
  P = 0.5 * (P + P.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(P);
  if (es.eigenvalues().minCoeff() < 1e-10)
    throw std::runtime_error("orbit tensor is near singular: action not free at this point");
  return P;
}

Eigen::Matrix3d p_t(const Eigen::Matrix3d& P, double t) {
  if (t < 0.0) throw std::invalid_argument("p_t: t must be nonnegative");
  return P * inv_one_plus_tp(P, t);
}

DeformedDecomposition decompose(const Bundle& b, const Vec& p, const Vec& xbar) {
  DeformedDecomposition d;
  const Vec vert = b.vertical_part(p, xbar);
  d.u = b.vert_to_algebra(p, vert);
  d.horizontal = b.total().project_tangent(p, xbar) - vert;
  return d;
}

Vec c_t_apply(const Bundle& b, const MetricField& m, const Vec& p, const Vec& xbar, double t) {
  if (t < 0.0) throw std::invalid_argument("c_t: t must be nonnegative");
  const auto d = decompose(b, p, xbar);
  const Eigen::Matrix3d P = orbit_tensor(b, m, p);
  const AlgebraVector u = inv_one_plus_tp(P, t) * d.u;
  return d.horizontal + b.action_vector_unchecked(p, u);
}

Vec c_t_inverse_apply(const Bundle& b, const MetricField& m, const Vec& p, const Vec& xbar,
                      double t) {
  if (t < 0.0) throw std::invalid_argument("c_t: t must be nonnegative");
  const auto d = decompose(b, p, xbar);
  const Eigen::Matrix3d P = orbit_tensor(b, m, p);
  const AlgebraVector u = (Eigen::Matrix3d::Identity() + t * P) * d.u;
  return d.horizontal + b.action_vector_unchecked(p, u);
}

MetricField cheeger_metric(const std::shared_ptr<const Bundle>& b, const MetricField& m,
                           double t) {
  if (t < 0.0) throw std::invalid_argument("cheeger_metric: t must be nonnegative");
  auto gram = [b, m, t](const Vec& p) {
    const Mat G = m.gram(p);
    const Mat A = b->action_frame(p);
    Eigen::Matrix3d P = A.transpose() * G * A;
    P = 0.5 * (P + P.transpose());
    const Mat GA = G * A;
    const Mat vertical_block = GA * P.inverse() * GA.transpose();
    const Mat deformed = GA * (inv_one_plus_tp(P, t) * P.inverse()) * GA.transpose();
    Mat out = G - vertical_block + deformed;
    return Mat(0.5 * (out + out.transpose()));
  };
  return MetricField(&b->total(), compose_descriptor("cheeger(" + fmt(t) + ")", m), gram, b);
}

MetricField regularized_metric(const std::shared_ptr<const Bundle>& b, const MetricField& m,
                               double t) {
  if (t <= 0.0) throw std::invalid_argument("regularized_metric: t must be positive");
  auto gram = [b, m, t](const Vec& p) {
    const Mat G = m.gram(p);
    const Mat A = b->action_frame(p);
    Eigen::Matrix3d P = A.transpose() * G * A;
    P = 0.5 * (P + P.transpose());
    const Mat GA = G * A;
    const Mat vertical_block = GA * P.inverse() * GA.transpose();
    const Mat deformed = GA * (t * inv_one_plus_tp(P, t) * P.inverse()) * GA.transpose();
    Mat out = G - vertical_block + deformed;
    return Mat(0.5 * (out + out.transpose()));
  };
  return MetricField(&b->total(), compose_descriptor("regularized(" + fmt(t) + ")", m), gram, b);
}

BasicScalar constant_scalar(double c) {
  if (c <= 0.0) throw std::invalid_argument("warping function must be positive");
  return {"const(" + fmt(c) + ")", [c](const Vec&) { return c; }};
}

BasicScalar affine_scalar(const std::shared_ptr<const Bundle>& b, double offset, int axis) {
  const double r = b->base().factors().front().radius;
  if (offset <= r) throw std::invalid_argument("warping function must stay positive");
  return {"affine(" + fmt(offset) + "+b" + fmt(axis) + ")",
          [b, offset, axis](const Vec& p) { return offset + b->project(p)[axis]; }};
}

MetricField warped_metric(const std::shared_ptr<const Bundle>& b, const MetricField& m,
                          const BasicScalar& h) {
  auto gram = [b, m, h](const Vec& p) {
    const double hv = h.value(p);
    if (hv <= 0.0) throw std::runtime_error("warping function must be positive");
    const Mat G = m.gram(p);
    const Mat A = b->action_frame(p);
    Eigen::Matrix3d P = A.transpose() * G * A;
    P = 0.5 * (P + P.transpose());
    const Mat GA = G * A;
    Mat out = G - (1.0 - 1.0 / hv) * (GA * P.inverse() * GA.transpose());
    return Mat(0.5 * (out + out.transpose()));
  };
  return MetricField(&b->total(), compose_descriptor("warped(" + h.descriptor + ")", m), gram, b);
}

AlgebraVector vertical_derivative_algebra(const Bundle& b, const MetricField& m, const Vec& p,
                                          const Vec& xbar, const Vec& ybar, const FdConfig& cfg) {
  const auto dy = decompose(b, p, ybar);
  const bool has_horizontal = dy.horizontal.norm() > 1e-14;
  auto field = [&](const Vec& q) {
    Vec val = b.action_vector_unchecked(q, dy.u);
    if (has_horizontal) val += b.basic_extension(p, dy.horizontal, q);
    return val;
  };
  const Vec deriv = covariant_derivative_of_field(m, p, xbar, field, cfg.fd_step_first, cfg);
  return b.vert_to_algebra(p, b.vertical_part(p, deriv));
}

double z_t_term(const Bundle& b, const MetricField& m, const Vec& p, const Vec& xbar,
                const Vec& ybar, double t, const FdConfig& cfg) {
  if (t < 0.0) throw std::invalid_argument("z_t_term: t must be nonnegative");
  if (t == 0.0) return 0.0;
  const Eigen::Matrix3d P = orbit_tensor(b, m, p);
  const auto dx = decompose(b, p, xbar);
  const auto dy = decompose(b, p, ybar);
  const AlgebraVector nv = vertical_derivative_algebra(b, m, p, xbar, ybar, cfg);
  const AlgebraVector br = bracket(P * dx.u, P * dy.u);
  const AlgebraVector arg = inv_sqrt_one_plus_tp(P, t) * (P * nv - 0.5 * t * br);
  return 3.0 * t * arg.squaredNorm();
}

double kappa_t(const Bundle& b, const MetricField& m, const Vec& p, const Vec& xbar,
               const Vec& ybar, double t, const FdConfig& cfg) {
  if (t < 0.0) throw std::invalid_argument("kappa_t: t must be nonnegative");
  const double kappa0 = CurvatureProbe(m, p, cfg).riemann4(xbar, ybar, ybar, xbar);
  if (t == 0.0) return kappa0;
  const Eigen::Matrix3d P = orbit_tensor(b, m, p);
  const auto dx = decompose(b, p, xbar);
  const auto dy = decompose(b, p, ybar);
  const double br2 = bracket(P * dx.u, P * dy.u).squaredNorm();
  return kappa0 + (t * t * t / 4.0) * br2 + z_t_term(b, m, p, xbar, ybar, t, cfg);
}

Mat limit_dual_a(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                 const FdConfig& cfg) {
  const Mat astar = a_star_operator(b, m, p, X, cfg);
  const Mat A = b.action_frame(p);
  const Eigen::Matrix3d P = orbit_tensor(b, m, p);
  // vertical vector -> algebra coordinates -> P^{-1} -> action vector -> A*_X
  const Mat to_algebra = (A.transpose() * A).ldlt().solve(A.transpose());
  return astar * A * P.inverse() * to_algebra;
}

double base_curvature_family(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                             const Vec& Y, double t, const FdConfig& cfg) {
  if (t < 0.0) throw std::invalid_argument("base_curvature_family: t must be nonnegative");
  const double kg = CurvatureProbe(m, p, cfg).riemann4(X, Y, Y, X);
  const Vec axy = a_tensor(b, p, X, Y, cfg);
  const AlgebraVector a = b.vert_to_algebra(p, axy);
  const Eigen::Matrix3d P = orbit_tensor(b, m, p);
  const Eigen::Matrix3d isq = inv_sqrt_one_plus_tp(P, t);
  const AlgebraVector w = isq * a;
  const double term2 = 3.0 * t * (isq * (P * a)).squaredNorm();
  const double term3 = 3.0 * w.dot(P * w);  // |((1+tP)^{-1/2} a)*|_m^2
  return kg + term2 + term3;
}

double base_curvature_family_limit(const Bundle& b, const MetricField& m, const Vec& p,
                                   const Vec& X, const Vec& Y, const FdConfig& cfg) {
  const double kg = CurvatureProbe(m, p, cfg).riemann4(X, Y, Y, X);
  const Vec axy = a_tensor(b, p, X, Y, cfg);
  const AlgebraVector a = b.vert_to_algebra(p, axy);
  const Eigen::Matrix3d P = orbit_tensor(b, m, p);
  return kg + 3.0 * a.dot(P * a);
}

}  // namespace curvlab
