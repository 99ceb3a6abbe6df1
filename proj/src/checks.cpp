#include "curvlab/checks.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace curvlab {

namespace {

double plane_gram(const MetricField& m, const Vec& p, const Vec& X, const Vec& Y) {
  const double xx = m.inner(p, X, X), yy = m.inner(p, Y, Y), xy = m.inner(p, X, Y);
  return xx * yy - xy * xy;
}

// Unreduced base curvature of the plane spanned by the horizontal lifts X, Y.
double base_curvature(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                      const Vec& Y, const FdConfig& cfg) {
  if (m.descriptor() == "reference")
    return b.base_curvature_constant() * plane_gram(m, p, X, Y);
  const double k = CurvatureProbe(m, p, cfg).riemann4(X, Y, Y, X);
  const Vec axy = a_tensor(b, p, X, Y, cfg);
  return k + 3.0 * m.inner(p, axy, axy);
}

// Holonomy-type extension data on the short two-sided geodesic of X:
// points, velocities and field values at s in {-h, 0, +h}.
struct ShortExtension {
  Vec pm, p0, pp;
  Vec vm, v0, vp;
  Vec wm, w0, wp;
};

ShortExtension holonomy_extension(const Bundle& b, const MetricField& m, const Vec& p,
                                  const Vec& X, const Vec& V, bool dual, const FdConfig& cfg) {
  const double h = cfg.fd_step_second;
  FdConfig mini = cfg;
  mini.rk4_steps_per_unit = std::max(cfg.rk4_steps_per_unit, 4000);
  const GeodesicPath fwd = integrate_geodesic(m, p, X, h, 2, mini);
  const GeodesicPath bwd = integrate_geodesic(m, p, -X, h, 2, mini);
  const FieldAlongCurve ff = dual ? dual_holonomy_field(b, m, fwd, V, mini)
                                  : holonomy_field(b, m, fwd, V, mini);
  const FieldAlongCurve fb = dual ? dual_holonomy_field(b, m, bwd, V, mini)
                                  : holonomy_field(b, m, bwd, V, mini);
  ShortExtension e;
  e.p0 = p;
  e.v0 = X;
  e.w0 = V;
  e.pp = fwd.points.back();
  e.vp = fwd.velocities.back();
  e.wp = ff.values.back();
  e.pm = bwd.points.back();
  e.vm = -bwd.velocities.back();
  e.wm = fb.values.back();
  return e;
}

}  // namespace

double cdr_margin(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X, const Vec& Y,
                  const AlgebraVector& u, const FdConfig& cfg) {
  if (u.norm() == 0.0) throw std::invalid_argument("cdr_margin: u must be nonzero");
  const double kb = base_curvature(b, m, p, X, Y, cfg);
  const Vec ustar = b.action_vector_unchecked(p, u);
  const Vec astar_u = a_star(b, m, p, X, ustar, cfg);
  const Vec na = nabla_a(b, m, p, X, Y, cfg, nullptr);
  const double pairing = m.inner(p, ustar, na);
  return kb * m.inner(p, astar_u, astar_u) - pairing * pairing;
}

double cdr_original_margin(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                           const Vec& Y, const AlgebraVector& u, const FdConfig& cfg,
                           const Mat* base_frame) {
  if (u.norm() == 0.0) throw std::invalid_argument("cdr_original_margin: u must be nonzero");
  const Vec b0 = b.project(p);
  Mat frame;
  if (base_frame) {
    frame = *base_frame;
    for (Eigen::Index i = 0; i < frame.cols(); ++i)
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double want = (i == j) ? 1.0 : 0.0;
        if (std::abs(frame.col(i).dot(frame.col(j)) - want) > 1e-8)
          throw std::invalid_argument("cdr_original_margin: base frame is not orthonormal");
      }
  } else {
    frame = b.base().tangent_basis(b0);
  }

  auto omega = [&](const Vec& q, const Vec& H1, const Vec& H2) -> AlgebraVector {
    return -2.0 * b.vert_to_algebra(q, a_tensor(b, q, H1, H2, cfg));
  };

  const double rh = base_curvature(b, m, p, X, Y, cfg);
  double lhs_sum = 0.0;
  for (Eigen::Index k = 0; k < frame.cols(); ++k) {
    const Vec lift = b.horizontal_lift(b0, frame.col(k), p);
    lhs_sum += std::pow(u.dot(omega(p, X, lift)), 2);
  }

  // Covariant derivative of Omega along the base geodesic of dpi(X): the
  // horizontal lift trivializes the adjoint bundle, so the derivative is a
  // plain central difference of algebra values on base-parallel arguments.
  const double h = cfg.fd_step_second;
  FdConfig mini = cfg;
  mini.rk4_steps_per_unit = std::max(cfg.rk4_steps_per_unit, 4000);
  const GeodesicPath fwd = integrate_geodesic(m, p, X, h, 2, mini);
  const GeodesicPath bwd = integrate_geodesic(m, p, -X, h, 2, mini);
  const Vec xb = b.dpi(p, X);
  const Vec yb = b.dpi(p, Y);
  auto omega_at = [&](const Vec& q, double s) -> AlgebraVector {
    const Vec bq = b.project(q);
    const Vec xs = b.horizontal_lift(bq, sphere_parallel(b.base(), b0, xb, s, xb), q);
    const Vec ys = b.horizontal_lift(bq, sphere_parallel(b.base(), b0, xb, s, yb), q);
    return omega(q, xs, ys);
  };
  const AlgebraVector domega =
      (omega_at(fwd.points.back(), h) - omega_at(bwd.points.back(), -h)) / (2.0 * h);

  return rh * lhs_sum - std::pow(u.dot(domega), 2);
}

double wnn_residual(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X, const Vec& V,
                    double tau, const FdConfig& cfg, double* varfim_residual) {
  if (tau <= 0.0) throw std::invalid_argument("wnn_residual: tau must be positive");
  const double h = cfg.fd_step_second;
  const ShortExtension e = holonomy_extension(b, m, p, X, V, /*dual=*/false, cfg);

  auto w_of = [&](const Vec& q, const Vec& vel, const Vec& xi) {
    return a_star(b, m, q, b.horizontal_part(q, vel), b.vertical_part(q, xi), cfg);
  };
  const Vec Wm = w_of(e.pm, e.vm, e.wm);
  const Vec W0 = w_of(e.p0, e.v0, e.w0);
  const Vec Wp = w_of(e.pp, e.vp, e.wp);

  const Vec dW = covariant_derivative_3pt(m, p, X, e.pm, e.pp, Wm, W0, Wp, h, cfg);
  const Vec sxv = s_tensor(b, m, p, X, V, cfg);
  const Vec a_s = a_star(b, m, p, X, sxv, cfg);

  const double rhs = m.inner(p, dW + 2.0 * a_s, W0);
  if (varfim_residual) {
    const double du =
        (m.inner(e.pp, Wp, Wp) - m.inner(e.pm, Wm, Wm)) / (2.0 * h);
    const double reduced = 0.5 * du + 2.0 * m.inner(p, a_s, W0);
    *varfim_residual = std::abs(rhs - reduced);
  }
  return tau * m.inner(p, X, X) * m.inner(p, W0, W0) - rhs;
}

double check_basic_astar(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                         const Vec& V, double T, const FdConfig& cfg) {
  if (s_tensor_magnitude(b, m, p, cfg) > 1e-4)
    throw std::runtime_error("check_basic_astar: hypothesis violated (fibers not totally geodesic)");
  const int steps = steps_for(T, cfg);
  const GeodesicPath path = integrate_geodesic(m, p, V, T, steps, cfg);
  const Vec bpt = b.project(p);
  const Vec xb = b.dpi(p, X);

  std::vector<Vec> W(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    const Vec& q = path.points[2 * i];
    const Vec lift = b.horizontal_lift(bpt, xb, q);
    W[i] = a_star(b, m, q, lift, b.vertical_part(q, path.velocities[2 * i]), cfg);
  }

  const double h = path.field_step();
  const int stride = std::max(1, steps / 8);
  double worst = 0.0;
  for (int i = stride; i + stride <= steps; i += stride) {
    const Vec& q = path.points[2 * i];
    const Vec& vel = path.velocities[2 * i];
    const Vec dW = covariant_derivative_3pt(m, q, vel, path.points[2 * (i - 1)],
                                            path.points[2 * (i + 1)], W[i - 1], W[i], W[i + 1], h,
                                            cfg);
    const Vec correction = a_star(b, m, q, W[i], b.vertical_part(q, vel), cfg);
    worst = std::max(worst, m.norm(q, dW + correction));
  }
  return worst;
}

GoodTripleResult check_good_triple(const Bundle& b, const MetricField& m, const Vec& p,
                                   const Vec& X, const Vec& V, double s_max, double t_max,
                                   int grid, const FdConfig& cfg, bool wrong_initial) {
  if (grid < 2) throw std::invalid_argument("check_good_triple: grid too small");
  const Vec astar_xv = a_star(b, m, p, X, V, cfg);
  const Vec A = wrong_initial ? Vec(Vec::Zero(p.size())) : Vec(-astar_xv);

  const int kc = std::max(1, (steps_for(t_max, cfg) + grid - 1) / grid);
  const int ks = std::max(1, (steps_for(s_max, cfg) + grid - 1) / grid);

  const GeodesicPath path_c = integrate_geodesic(m, p, X, t_max, grid * kc, cfg);
  const GeodesicPath path_g = integrate_geodesic(m, p, V, s_max, grid * ks, cfg);
  const JacobiField Vt = integrate_jacobi(m, path_c, V, A, cfg);
  const JacobiField Xs = integrate_jacobi(m, path_g, X, A, cfg);

  // surface_a[i][j] = exp_{c(t_i)}(s_j V(t_i)); surface_b[j][i] = exp_{g(s_j)}(t_i X(s_j))
  double mismatch = 0.0;
  std::vector<std::vector<Vec>> surface_a(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    const Vec& q = path_c.points[2 * i * kc];
    const Vec& J = Vt.values[i * kc];
    const GeodesicPath ray = integrate_geodesic(m, q, J, s_max, grid * ks, cfg);
    surface_a[i].resize(grid + 1);
    for (int j = 0; j <= grid; ++j) surface_a[i][j] = ray.points[2 * j * ks];
  }
  for (int j = 0; j <= grid; ++j) {
    const Vec& q = path_g.points[2 * j * ks];
    const Vec& J = Xs.values[j * ks];
    const GeodesicPath ray = integrate_geodesic(m, q, J, t_max, grid * kc, cfg);
    for (int i = 0; i <= grid; ++i)
      mismatch = std::max(mismatch, (surface_a[i][j] - ray.points[2 * i * kc]).norm());
  }
  return {mismatch, astar_xv.norm()};
}

TappResiduals check_theorem_tapp(const Bundle& b, const MetricField& m,
                                 const VertizontalFrame& frame, const FdConfig& cfg) {
  const Vec& p = frame.p;
  CurvatureProbe probe(m, p, cfg);
  const Vec W = a_star(b, m, p, frame.X, frame.V, cfg);

  TappResiduals out;
  out.vertizontal_plane = std::abs(probe.riemann4(frame.X, W, W, frame.V));

  // <nabla_X A*_Y V, A*_X V> with V extended as a dual holonomy field and Y
  // extended basically (base-parallel) along the geodesic of X.
  const double h = cfg.fd_step_second;
  const ShortExtension e = holonomy_extension(b, m, p, frame.X, frame.V, /*dual=*/true, cfg);
  const Vec b0 = b.project(p);
  const Vec xb = b.dpi(p, frame.X);
  const Vec yb = b.dpi(p, frame.Y);
  auto w2_of = [&](const Vec& q, double s, const Vec& nu) {
    const Vec ys = b.horizontal_lift(b.project(q), sphere_parallel(b.base(), b0, xb, s, yb), q);
    return a_star(b, m, q, ys, b.vertical_part(q, nu), cfg);
  };
  const Vec W2m = w2_of(e.pm, -h, e.wm);
  const Vec W20 = a_star(b, m, p, frame.Y, frame.V, cfg);
  const Vec W2p = w2_of(e.pp, h, e.wp);
  const Vec dW2 = covariant_derivative_3pt(m, p, frame.X, e.pm, e.pp, W2m, W20, W2p, h, cfg);
  out.mixed_identity =
      std::abs(probe.riemann4(frame.X, frame.V, W, frame.Y) - m.inner(p, dW2, W));

  out.fat = fatness_check(b, m, p, frame.V, cfg).fat;
  out.fat_plane = out.fat ? std::abs(probe.riemann4(frame.X, frame.V, W, frame.X)) : 0.0;
  return out;
}

CorollaryFlatResiduals check_corollary_flat(const Bundle& b, const MetricField& m,
                                            const VertizontalFrame& frame, const FdConfig& cfg) {
  const Vec& p = frame.p;
  CurvatureProbe probe(m, p, cfg);
  CorollaryFlatResiduals out;

  const Mat kernel = kernel_a_x(b, m, p, frame.X, cfg);
  Eigen::Index pick = 0;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < kernel.cols(); ++j) {
    const double overlap = std::abs(m.inner(p, kernel.col(j), frame.X));
    if (overlap < best) {
      best = overlap;
      pick = j;
    }
  }
  const Vec Y1 = kernel.col(pick);
  out.kernel_plane = std::abs(probe.riemann4(frame.X, Y1, Y1, frame.V));

  out.fat = fatness_check(b, m, p, frame.V, cfg).fat;
  out.basic_plane = out.fat ? std::abs(probe.riemann4(frame.X, frame.Y, frame.Y, frame.V)) : 0.0;
  return out;
}

double check_k_identity(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                        const Vec& V, double T, const FdConfig& cfg) {
  const int steps = steps_for(T, cfg);
  const GeodesicPath path = integrate_geodesic(m, p, X, T, steps, cfg);
  const FieldAlongCurve nu = dual_holonomy_field(b, m, path, V, cfg);

  std::vector<double> usq(steps + 1);
  for (int i = 0; i <= steps; ++i)
    usq[i] = m.inner(path.points[2 * i], nu.values[i], nu.values[i]);

  const double h = path.field_step();
  const int stride = std::max(1, steps / 8);
  double worst = 0.0;
  for (int i = stride; i + stride <= steps; i += stride) {
    const Vec& q = path.points[2 * i];
    const Vec& cdot = path.velocities[2 * i];
    const Vec& nui = nu.values[i];
    const double lhs = CurvatureProbe(m, q, cfg).riemann4(cdot, nui, nui, cdot);
    const double d2u = (usq[i + 1] - 2.0 * usq[i] + usq[i - 1]) / (h * h);
    const Vec s = s_tensor(b, m, q, b.horizontal_part(q, cdot), nui, cfg);
    const Vec a = a_star(b, m, q, b.horizontal_part(q, cdot), nui, cfg);
    const double rhs = 0.5 * d2u - 3.0 * m.inner(q, s, s) + m.inner(q, a, a);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double dual_inv_check(const Bundle& b, const MetricField& m1, const MetricField& m2, const Vec& p,
                      const Vec& X, const Vec& nu0, double T, const FdConfig& cfg) {
  // Both metrics must vanish on V x H and agree on H.
  {
    const std::vector<Vec> probes = {p, b.total().retract(p, 0.23 * X),
                                     b.total().retract(p, -0.41 * X)};
    for (const Vec& q : probes) {
      const Mat H = b.horizontal_basis(q, m1);
      const Mat B = b.vertical_basis(q, m1);
      for (Eigen::Index i = 0; i < H.cols(); ++i) {
        for (Eigen::Index j = 0; j < B.cols(); ++j) {
          if (std::abs(m1.inner(q, H.col(i), B.col(j))) > 1e-8 ||
              std::abs(m2.inner(q, H.col(i), B.col(j))) > 1e-8)
            throw std::invalid_argument("dual_inv_check: metrics are not adapted");
        }
        for (Eigen::Index k = 0; k <= i; ++k) {
          if (std::abs(m1.inner(q, H.col(i), H.col(k)) - m2.inner(q, H.col(i), H.col(k))) > 1e-8)
            throw std::invalid_argument("dual_inv_check: metrics disagree on the horizontal space");
        }
      }
    }
  }

  const int steps = steps_for(T, cfg);
  const GeodesicPath path = integrate_geodesic(m1, p, X, T, steps, cfg);
  if (speed_drift(m2, path) > 1e-3)
    throw std::runtime_error("dual_inv_check: curve is not a geodesic of the second metric");

  const Mat B1 = b.vertical_basis(p, m1);
  const Mat G1 = m1.gram(p);
  const Mat G2 = m2.gram(p);
  const Eigen::Matrix3d Pmat = B1.transpose() * G2 * B1;
  const Vec nu_start = B1 * (Pmat * (B1.transpose() * G1 * nu0));

  const FieldAlongCurve nu = dual_holonomy_field(b, m1, path, nu_start, cfg);
  const FieldAlongCurve nup = dual_holonomy_field(b, m2, path, nu0, cfg);

  const int stride = std::max(1, steps / 8);
  double worst = 0.0;
  for (int i = 0; i <= steps; i += stride) {
    const Vec& q = path.points[2 * i];
    const Vec cdot = b.horizontal_part(q, path.velocities[2 * i]);
    const Vec lhs = a_star(b, m2, q, cdot, nup.values[i], cfg);
    const Vec rhs = a_star(b, m1, q, cdot, nu.values[i], cfg);
    worst = std::max(worst, m1.norm(q, lhs - rhs));
  }
  return worst;
}

double warped_sectional(const Bundle& b, const MetricField& m, const BasicScalar& h, const Vec& p,
                        PlaneKind kind, const Vec& v1, const Vec& v2, const FdConfig& cfg) {
  // Basic means constant on fibers.
  {
    const double h0 = h.value(p);
    const AlgebraVector dirs[3] = {AlgebraVector(0.7, 0, 0), AlgebraVector(0, 1.3, 0),
                                   AlgebraVector(0.4, 0.4, 0.4)};
    for (const auto& u : dirs) {
      const double hv = h.value(b.act(group_exp(u), p));
      if (std::abs(hv - h0) > 1e-8 * std::max(1.0, std::abs(h0)))
        throw std::invalid_argument("warped_sectional: warping function is not basic");
    }
  }
  const double hv = h.value(p);
  const double hinv = 1.0 / hv;
  auto fn = h.value;
  CurvatureProbe probe(m, p, cfg);

  switch (kind) {
    case PlaneKind::HorizontalHorizontal: {
      const double k = probe.riemann4(v1, v2, v2, v1);
      const Vec axy = a_tensor(b, p, v1, v2, cfg);
      const double kb = k + 3.0 * m.inner(p, axy, axy);
      return (1.0 - hinv) * kb + hinv * k;
    }
    case PlaneKind::VerticalVertical: {
      const double scale = m.norm(p, v1) * m.norm(p, v2);
      if (std::abs(m.inner(p, v1, v2)) > 1e-10 * std::max(1.0, scale))
        throw std::invalid_argument("warped_sectional: vv pair must be orthogonal");
      const double kg = probe.riemann4(v1, v2, v2, v1);
      const Vec s11 = sigma_form(b, m, p, v1, v1, cfg);
      const Vec s22 = sigma_form(b, m, p, v2, v2, cfg);
      const Vec s12 = sigma_form(b, m, p, v1, v2, cfg);
      const double kf = kg + m.inner(p, s11, s22) - m.inner(p, s12, s12);
      const Vec grad = gradient(m, fn, p, cfg);
      const double n1 = m.inner(p, v1, v1), n2 = m.inner(p, v2, v2);
      return (hinv - hinv * hinv) * kf + hinv * hinv * kg -
             0.25 * std::pow(hinv, 4) * n1 * n2 * m.inner(p, grad, grad) -
             0.5 * std::pow(hinv, 3) * differential(m, fn, p, s11, cfg) * n2 -
             0.5 * std::pow(hinv, 3) * differential(m, fn, p, s22, cfg) * n1;
    }
    case PlaneKind::Vertizontal: {
      const Vec& X = v1;
      const Vec& V = v2;
      const double kg = probe.riemann4(X, V, V, X);
      const Vec astar = a_star(b, m, p, X, V, cfg);
      const Vec sxv = s_tensor(b, m, p, X, V, cfg);
      const double dhx = differential(m, fn, p, X, cfg);
      const double hess = hessian_quadratic(m, fn, p, X, cfg);
      const double nv = m.inner(p, V, V);
      return kg * hinv - hinv * (1.0 - hinv) * m.inner(p, astar, astar) -
             hinv * hinv * dhx * m.inner(p, sxv, V) -
             0.25 * (-2.0 * hess + 3.0 * dhx * dhx) * hinv * hinv * nv;
    }
  }
  throw std::logic_error("warped_sectional: unreachable");
}

std::vector<AlgebraVector> algebra_grid_162() {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<AlgebraVector> verts;
  for (double s1 : {-1.0, 1.0})
    for (double s2 : {-1.0, 1.0}) {
      verts.emplace_back(0.0, s1, s2 * phi);
      verts.emplace_back(s1, s2 * phi, 0.0);
      verts.emplace_back(s1 * phi, 0.0, s2);
    }
  for (auto& v : verts) v.normalize();

  // Faces are the triangles whose three sides all realize the minimal
  // pairwise distance (the icosahedral edge length).
  std::vector<std::array<int, 3>> faces;
  double emin = 1e9;
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j)
      emin = std::min(emin, (verts[i] - verts[j]).norm());
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j)
      for (std::size_t k = j + 1; k < verts.size(); ++k) {
        if ((verts[i] - verts[j]).norm() < emin * 1.01 &&
            (verts[j] - verts[k]).norm() < emin * 1.01 &&
            (verts[i] - verts[k]).norm() < emin * 1.01)
          faces.push_back({static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)});
      }

  auto key = [](const AlgebraVector& v) {
    return std::array<long long, 3>{static_cast<long long>(std::llround(v[0] * 1e9)),
                                    static_cast<long long>(std::llround(v[1] * 1e9)),
                                    static_cast<long long>(std::llround(v[2] * 1e9))};
  };

  for (int level = 0; level < 2; ++level) {
    std::map<std::array<long long, 3>, int> index;
    std::vector<AlgebraVector> nv;
    auto add = [&](const AlgebraVector& v) {
      const auto k = key(v);
      auto it = index.find(k);
      if (it != index.end()) return it->second;
      index[k] = static_cast<int>(nv.size());
      nv.push_back(v);
      return static_cast<int>(nv.size()) - 1;
    };
    std::vector<std::array<int, 3>> nf;
    for (const auto& f : faces) {
      const AlgebraVector a = verts[f[0]], b2 = verts[f[1]], c = verts[f[2]];
      const AlgebraVector ab = AlgebraVector(a + b2).normalized();
      const AlgebraVector bc = AlgebraVector(b2 + c).normalized();
      const AlgebraVector ca = AlgebraVector(c + a).normalized();
      const int ia = add(a), ib = add(b2), ic = add(c);
      const int iab = add(ab), ibc = add(bc), ica = add(ca);
      nf.push_back({ia, iab, ica});
      nf.push_back({ib, ibc, iab});
      nf.push_back({ic, ica, ibc});
      nf.push_back({iab, ibc, ica});
    }
    verts = std::move(nv);
    faces = std::move(nf);
  }

  std::sort(verts.begin(), verts.end(), [](const AlgebraVector& a, const AlgebraVector& b2) {
    if (a[0] != b2[0]) return a[0] < b2[0];
    if (a[1] != b2[1]) return a[1] < b2[1];
    return a[2] < b2[2];
  });
  return verts;
}

}  // namespace curvlab
