#include "curvlab/oneill.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace curvlab {

namespace {

void require_horizontal(const Bundle& b, const Vec& p, const Vec& v, const char* what) {
  const double n = v.norm();
  if (n > 0.0 && b.vertical_part(p, v).norm() > 1e-6 * n)
    throw std::invalid_argument(std::string(what) + ": vector is not horizontal");
}

void require_vertical(const Bundle& b, const Vec& p, const Vec& v, const char* what) {
  const double n = v.norm();
  if (n > 0.0 && b.horizontal_part(p, v).norm() > 1e-6 * n)
    throw std::invalid_argument(std::string(what) + ": vector is not vertical");
}

// Directional derivative at p of an ambient-valued field along the retraction
// curve of X.
Vec directional(const SphereProduct& dom, const Vec& p, const Vec& X,
                const std::function<Vec(const Vec&)>& field, double h) {
  return (field(dom.retract(p, h * X)) - field(dom.retract(p, -h * X))) / (2.0 * h);
}

}  // namespace

Vec a_tensor(const Bundle& b, const Vec& p, const Vec& X, const Vec& Y, const FdConfig& cfg) {
  require_horizontal(b, p, X, "a_tensor");
  require_horizontal(b, p, Y, "a_tensor");
  const double h = cfg.fd_step_first;
  auto xt = [&](const Vec& q) { return b.basic_extension(p, X, q); };
  auto yt = [&](const Vec& q) { return b.basic_extension(p, Y, q); };
  const Vec lie = directional(b.total(), p, X, yt, h) - directional(b.total(), p, Y, xt, h);
  return 0.5 * b.vertical_part(p, lie);
}

std::vector<std::vector<Vec>> a_pairwise(const Bundle& b, const Vec& p, const Mat& H,
                                         const FdConfig& cfg) {
  const int n = static_cast<int>(H.cols());
  std::vector<std::vector<Vec>> out(n, std::vector<Vec>(n));
  for (int i = 0; i < n; ++i) {
    out[i][i] = Vec::Zero(H.rows());
    for (int j = i + 1; j < n; ++j) {
      out[i][j] = a_tensor(b, p, H.col(i), H.col(j), cfg);
      out[j][i] = -out[i][j];
    }
  }
  return out;
}

Mat a_star_operator(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                    const FdConfig& cfg) {
  const Mat H = b.horizontal_basis(p, m);
  const Mat G = m.gram(p);
  Mat op = Mat::Zero(H.rows(), H.rows());
  for (Eigen::Index k = 0; k < H.cols(); ++k) {
    const Vec axk = a_tensor(b, p, X, H.col(k), cfg);
    op += H.col(k) * (G * axk).transpose();
  }
  return op;
}

Vec a_star(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X, const Vec& V,
           const FdConfig& cfg) {
  require_vertical(b, p, V, "a_star");
  const Mat H = b.horizontal_basis(p, m);
  const Mat G = m.gram(p);
  Vec out = Vec::Zero(p.size());
  for (Eigen::Index k = 0; k < H.cols(); ++k)
    out += a_tensor(b, p, X, H.col(k), cfg).dot(G * V) * H.col(k);
  return out;
}

Vec s_tensor(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X, const Vec& V,
             const FdConfig& cfg) {
  require_horizontal(b, p, X, "s_tensor");
  require_vertical(b, p, V, "s_tensor");
  auto xt = [&](const Vec& q) { return b.basic_extension(p, X, q); };
  const Vec d = covariant_derivative_of_field(m, p, V, xt, cfg.fd_step_first, cfg);
  return -b.vertical_part(p, d);
}

Mat s_operator(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
               const FdConfig& cfg) {
  const Mat B = b.vertical_basis(p, m);
  const Mat G = m.gram(p);
  Mat op = Mat::Zero(B.rows(), B.rows());
  for (Eigen::Index j = 0; j < B.cols(); ++j)
    op += s_tensor(b, m, p, X, B.col(j), cfg) * (G * B.col(j)).transpose();
  return op;
}

Vec sigma_form(const Bundle& b, const MetricField& m, const Vec& p, const Vec& V, const Vec& W,
               const FdConfig& cfg) {
  const Mat H = b.horizontal_basis(p, m);
  const Mat G = m.gram(p);
  Vec out = Vec::Zero(p.size());
  for (Eigen::Index k = 0; k < H.cols(); ++k)
    out += s_tensor(b, m, p, H.col(k), V, cfg).dot(G * W) * H.col(k);
  return out;
}

double s_tensor_magnitude(const Bundle& b, const MetricField& m, const Vec& p,
                          const FdConfig& cfg) {
  const Mat H = b.horizontal_basis(p, m);
  const Mat B = b.vertical_basis(p, m);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < H.cols(); ++k)
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      worst = std::max(worst, m.norm(p, s_tensor(b, m, p, H.col(k), B.col(j), cfg)));
  return worst;
}

namespace {

void require_path_horizontal(const Bundle& b, const GeodesicPath& path) {
  for (std::size_t i = 0; i < path.points.size(); i += std::max<std::size_t>(1, path.points.size() / 8)) {
    const Vec& v = path.velocities[i];
    if (v.norm() > 0.0 && b.vertical_part(path.points[i], v).norm() > 1e-5 * v.norm())
      throw std::invalid_argument("field equation requires a horizontal curve");
  }
}

FieldAlongCurve vertical_field(const Bundle& b, const MetricField& m, const GeodesicPath& path,
                               const Vec& w0, double s_sign, const FdConfig& cfg) {
  require_path_horizontal(b, path);
  require_vertical(b, path.points.front(), w0, "holonomy field");
  NodeOperator op = [&b, &m, s_sign, &cfg](int, const Vec& p, const Vec& v) {
    return -a_star_operator(b, m, p, v, cfg) + s_sign * s_operator(b, m, p, v, cfg);
  };
  Stabilizer stab = [&b](const Vec& p, const Vec& w) { return b.vertical_part(p, w); };
  return integrate_transport(m, path, w0, op, stab, cfg);
}

}  // namespace

FieldAlongCurve holonomy_field(const Bundle& b, const MetricField& m, const GeodesicPath& path,
                               const Vec& xi0, const FdConfig& cfg) {
  return vertical_field(b, m, path, xi0, -1.0, cfg);
}

FieldAlongCurve dual_holonomy_field(const Bundle& b, const MetricField& m,
                                    const GeodesicPath& path, const Vec& nu0,
                                    const FdConfig& cfg) {
  return vertical_field(b, m, path, nu0, +1.0, cfg);
}

FieldAlongCurve basic_field(const Bundle& b, const MetricField& m, const GeodesicPath& path,
                            const Vec& X0, const FdConfig& cfg) {
  for (std::size_t i = 0; i < path.points.size(); i += std::max<std::size_t>(1, path.points.size() / 8)) {
    const Vec& v = path.velocities[i];
    if (v.norm() > 0.0 && b.horizontal_part(path.points[i], v).norm() > 1e-5 * v.norm())
      throw std::invalid_argument("basic field requires a vertical curve");
  }
  require_horizontal(b, path.points.front(), X0, "basic field");
  NodeOperator op = [&b, &m, &cfg](int, const Vec& p, const Vec& v) {
    const Mat H = b.horizontal_basis(p, m);
    const Mat G = m.gram(p);
    Mat out = Mat::Zero(p.size(), p.size());
    for (Eigen::Index k = 0; k < H.cols(); ++k) {
      const Vec col = -a_star(b, m, p, H.col(k), b.vertical_part(p, v), cfg) -
                      s_tensor(b, m, p, H.col(k), b.vertical_part(p, v), cfg);
      out += col * (G * H.col(k)).transpose();
    }
    return out;
  };
  Stabilizer stab = [&b](const Vec& p, const Vec& w) { return b.horizontal_part(p, w); };
  return integrate_transport(m, path, X0, op, stab, cfg);
}

Vec nabla_a(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X, const Vec& Y,
            const FdConfig& cfg, double* cross_residual) {
  const double h = cfg.fd_step_second;
  FdConfig mini = cfg;
  mini.rk4_steps_per_unit = std::max(cfg.rk4_steps_per_unit, 4000);

  const GeodesicPath fwd = integrate_geodesic(m, p, X, h, 2, mini);
  const GeodesicPath bwd = integrate_geodesic(m, p, -X, h, 2, mini);
  const Vec qp = fwd.points.back(), qm = bwd.points.back();

  const Vec yp = parallel_transport(m, fwd, Y, mini).values.back();
  const Vec ym = parallel_transport(m, bwd, Y, mini).values.back();
  const Vec xp = fwd.velocities.back();
  const Vec xm = -bwd.velocities.back();

  const Vec ap = a_tensor(b, qp, b.horizontal_part(qp, xp), b.horizontal_part(qp, yp), cfg);
  const Vec am = a_tensor(b, qm, b.horizontal_part(qm, xm), b.horizontal_part(qm, ym), cfg);
  const Vec a0 = a_tensor(b, p, X, Y, cfg);

  const Vec deriv = covariant_derivative_3pt(m, p, X, qm, qp, am, a0, ap, h, cfg);
  const Vec route1 = b.vertical_part(p, deriv);

  if (cross_residual) {
    CurvatureProbe probe(m, p, cfg);
    const Mat B = b.vertical_basis(p, m);
    Vec route2 = Vec::Zero(p.size());
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      route2 += probe.riemann4(X, Y, B.col(j), X) * B.col(j);
    *cross_residual = m.norm(p, route1 - route2);
  }
  return route1;
}

Mat kernel_a_x(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
               const FdConfig& cfg) {
  if (X.norm() == 0.0) throw std::invalid_argument("kernel_a_x: X must be nonzero");
  const Mat H = b.horizontal_basis(p, m);
  const Mat B = b.vertical_basis(p, m);
  const Mat G = m.gram(p);
  Mat K(B.cols(), H.cols());
  for (Eigen::Index k = 0; k < H.cols(); ++k) {
    const Vec axk = a_tensor(b, p, X, H.col(k), cfg);
    for (Eigen::Index i = 0; i < B.cols(); ++i) K(i, k) = axk.dot(G * B.col(i));
  }
  Eigen::JacobiSVD<Mat> svd(K, Eigen::ComputeFullV);
  const Vec sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < H.cols(); ++j) {
    const double s = j < sv.size() ? sv[j] : 0.0;
    if (smax < 1e-7 || s < 1e-6 * smax) keep.push_back(j);
  }
  Mat kernel(H.rows(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) kernel.col(i) = H * svd.matrixV().col(keep[i]);
  return kernel;
}

FatnessCertificate fatness_check(const Bundle& b, const MetricField& m, const Vec& p, const Vec& V,
                                 const FdConfig& cfg) {
  if (V.norm() == 0.0) throw std::invalid_argument("fatness_check: V must be nonzero");
  require_vertical(b, p, V, "fatness_check");
  const Mat H = b.horizontal_basis(p, m);
  const Mat G = m.gram(p);
  const auto pairs = a_pairwise(b, p, H, cfg);
  const int n = static_cast<int>(H.cols());
  Mat omega = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      omega(i, j) = pairs[i][j].dot(G * V);
      omega(j, i) = -omega(i, j);
    }
  FatnessCertificate cert;
  cert.p = p;
  cert.V = V;
  cert.omega = omega;
  cert.min_abs_det = (n % 2 == 0) ? std::abs(omega.determinant()) : 0.0;
  cert.fat = (n % 2 == 0) && cert.min_abs_det > 1e-8;
  return cert;
}

}  // namespace curvlab
