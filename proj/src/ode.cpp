#include "curvlab/ode.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace curvlab {

int steps_for(double T, const FdConfig& cfg) {
  const int n = static_cast<int>(std::ceil(std::abs(T) * cfg.rk4_steps_per_unit));
  return std::max(2, n);
}

GeodesicPath integrate_geodesic(const MetricField& m, const Vec& p0, const Vec& v0, double T,
                                int field_steps, const FdConfig& cfg) {
  if (field_steps < 2) throw std::invalid_argument("geodesic: step count < 2");
  m.domain().require_point(p0);

  GeodesicPath path;
  const int substeps = 2 * field_steps;
  path.dt = T / static_cast<double>(substeps);
  path.field_steps = field_steps;
  path.points.reserve(substeps + 1);
  path.velocities.reserve(substeps + 1);
  path.points.push_back(p0);
  path.velocities.push_back(v0);

  Vec p = p0, v = v0;
  const double h = path.dt;
  for (int s = 0; s < substeps; ++s) {
    Chart chart(m.domain(), p);
    const int d = chart.dim();
    auto gamma_at = [&](const Vec& x) {
      return christoffel_in_chart(m, chart, x, cfg.fd_step_first);
    };
    // state (x, u), x' = u, u' = -Gamma_x(u, u)
    Vec x = Vec::Zero(d);
    Vec u = chart.frame().transpose() * v;

    const Christoffel g1 = gamma_at(x);
    const Vec k1x = u;
    const Vec k1u = -christoffel_apply(g1, u, u);

    const Vec x2 = x + 0.5 * h * k1x, u2 = u + 0.5 * h * k1u;
    const Christoffel g2 = gamma_at(x2);
    const Vec k2x = u2;
    const Vec k2u = -christoffel_apply(g2, u2, u2);

    const Vec x3 = x + 0.5 * h * k2x, u3 = u + 0.5 * h * k2u;
    const Christoffel g3 = gamma_at(x3);
    const Vec k3x = u3;
    const Vec k3u = -christoffel_apply(g3, u3, u3);

    const Vec x4 = x + h * k3x, u4 = u + h * k3u;
    const Christoffel g4 = gamma_at(x4);
    const Vec k4x = u4;
    const Vec k4u = -christoffel_apply(g4, u4, u4);

    const Vec xn = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    const Vec un = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);

    p = chart.point(xn);
    v = chart.pushforward(xn) * un;
    path.points.push_back(p);
    path.velocities.push_back(v);
  }
  return path;
}

double speed_drift(const MetricField& m, const GeodesicPath& path) {
  const double s0 = m.norm(path.points.front(), path.velocities.front());
  if (s0 == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    const double s = m.norm(path.points[i], path.velocities[i]);
    worst = std::max(worst, std::abs(s - s0) / s0);
  }
  return worst;
}

namespace {

struct Stage {
  Vec x;            // chart coords of the node
  Vec vchart;       // chart components of the node velocity
  Christoffel gamma;
  Mat J;            // pushforward at x
  Eigen::LDLT<Mat> JtJ;
  Mat M;            // ambient operator (may be empty)

  Vec to_chart(const Vec& ambient) const { return JtJ.solve(J.transpose() * ambient); }
  Vec rhs(const Vec& w) const {
    Vec out = -christoffel_apply(gamma, vchart, w);
    if (M.size() > 0) out += to_chart(M * (J * w));
    return out;
  }
};

Stage make_stage(const MetricField& m, const Chart& chart, const Vec& point, const Vec& velocity,
                 const Mat& M, const FdConfig& cfg) {
  Stage st;
  st.x = chart.coords_of(point);
  if (st.x.norm() < 1e-14) st.x.setZero();
  st.J = chart.pushforward(st.x);
  st.JtJ.compute(st.J.transpose() * st.J);
  st.vchart = st.JtJ.solve(st.J.transpose() * velocity);
  st.gamma = christoffel_in_chart(m, chart, st.x, cfg.fd_step_first);
  st.M = M;
  return st;
}

}  // namespace

FieldAlongCurve integrate_transport(const MetricField& m, const GeodesicPath& path, const Vec& w0,
                                    const NodeOperator& op, const Stabilizer& stabilize,
                                    const FdConfig& cfg) {
  FieldAlongCurve field;
  field.h = path.field_step();
  field.values.reserve(path.field_steps + 1);
  field.values.push_back(w0);

  std::vector<Mat> op_cache(path.points.size());
  auto op_at = [&](int node) -> const Mat& {
    if (op && op_cache[node].size() == 0)
      op_cache[node] = op(node, path.points[node], path.velocities[node]);
    return op_cache[node];
  };

  const double h = field.h;
  Vec w = w0;
  for (int i = 0; i < path.field_steps; ++i) {
    const int n0 = 2 * i;
    Chart chart(m.domain(), path.points[n0]);
    const Stage s0 = make_stage(m, chart, path.points[n0], path.velocities[n0], op_at(n0), cfg);
    const Stage s1 =
        make_stage(m, chart, path.points[n0 + 1], path.velocities[n0 + 1], op_at(n0 + 1), cfg);
    const Stage s2 =
        make_stage(m, chart, path.points[n0 + 2], path.velocities[n0 + 2], op_at(n0 + 2), cfg);

    Vec wc = chart.frame().transpose() * w;
    const Vec k1 = s0.rhs(wc);
    const Vec k2 = s1.rhs(wc + 0.5 * h * k1);
    const Vec k3 = s1.rhs(wc + 0.5 * h * k2);
    const Vec k4 = s2.rhs(wc + h * k3);
    wc += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    w = s2.J * wc;
    if (stabilize && cfg.proj_stabilize) w = stabilize(path.points[n0 + 2], w);
    field.values.push_back(w);
  }
  return field;
}

FieldAlongCurve parallel_transport(const MetricField& m, const GeodesicPath& path, const Vec& w0,
                                   const FdConfig& cfg) {
  const auto* dom = &m.domain();
  return integrate_transport(
      m, path, w0, nullptr,
      [dom](const Vec& p, const Vec& w) { return dom->project_tangent(p, w); }, cfg);
}

JacobiField integrate_jacobi(const MetricField& m, const GeodesicPath& path, const Vec& J0,
                             const Vec& Jdot0, const FdConfig& cfg) {
  JacobiField out;
  out.h = path.field_step();
  out.values.push_back(J0);
  out.derivatives.push_back(Jdot0);

  std::vector<std::unique_ptr<CurvatureProbe>> probes(path.points.size());
  auto probe_at = [&](int node) -> const CurvatureProbe& {
    if (!probes[node]) probes[node] = std::make_unique<CurvatureProbe>(m, path.points[node], cfg);
    return *probes[node];
  };

  const double h = out.h;
  Vec a_amb = J0, b_amb = Jdot0;
  for (int i = 0; i < path.field_steps; ++i) {
    const int n0 = 2 * i;
    Chart chart(m.domain(), path.points[n0]);
    const Mat empty;
    const Stage s0 = make_stage(m, chart, path.points[n0], path.velocities[n0], empty, cfg);
    const Stage s1 = make_stage(m, chart, path.points[n0 + 1], path.velocities[n0 + 1], empty, cfg);
    const Stage s2 = make_stage(m, chart, path.points[n0 + 2], path.velocities[n0 + 2], empty, cfg);
    const std::array<const Stage*, 3> stages = {&s0, &s1, &s2};
    const std::array<int, 3> nodes = {n0, n0 + 1, n0 + 2};

    auto rhs = [&](int si, const Vec& a, const Vec& b, Vec& da, Vec& db) {
      const Stage& st = *stages[si];
      da = b - christoffel_apply(st.gamma, st.vchart, a);
      const Vec Ja = st.J * a;
      const Vec r = probe_at(nodes[si]).riemann(Ja, path.velocities[nodes[si]],
                                                path.velocities[nodes[si]]);
      db = -christoffel_apply(st.gamma, st.vchart, b) - st.to_chart(r);
    };

    Vec a = chart.frame().transpose() * a_amb;
    Vec b = chart.frame().transpose() * b_amb;
    Vec k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
    rhs(0, a, b, k1a, k1b);
    rhs(1, a + 0.5 * h * k1a, b + 0.5 * h * k1b, k2a, k2b);
    rhs(1, a + 0.5 * h * k2a, b + 0.5 * h * k2b, k3a, k3b);
    rhs(2, a + h * k3a, b + h * k3b, k4a, k4b);
    a += (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    b += (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);

    a_amb = s2.J * a;
    b_amb = s2.J * b;
    out.values.push_back(a_amb);
    out.derivatives.push_back(b_amb);
  }
  return out;
}

Vec sphere_geodesic(const SphereProduct& sph, const Vec& b0, const Vec& w, double s) {
  const double r = sph.factors().front().radius;
  const double speed = w.norm();
  if (speed == 0.0) return b0;
  const double th = speed * s / r;
  return std::cos(th) * b0 + (r / speed) * std::sin(th) * w;
}

Vec sphere_parallel(const SphereProduct& sph, const Vec& b0, const Vec& w, double s,
                    const Vec& u0) {
  const double r = sph.factors().front().radius;
  const double speed = w.norm();
  if (speed == 0.0) return u0;
  const Vec what = w / speed;
  const Vec bhat = b0 / r;
  const double th = speed * s / r;
  const double alpha = u0.dot(what);
  const Vec perp = u0 - alpha * what;
  return alpha * (std::cos(th) * what - std::sin(th) * bhat) + perp;
}

}  // namespace curvlab
