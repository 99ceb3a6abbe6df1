#pragma once

#include <functional>
#include <vector>

#include "curvlab/fd.hpp"
#include "curvlab/metric.hpp"

namespace curvlab {

/// Discretized geodesic. Nodes are stored at twice the field-step resolution
/// so that field integrators find exact states at RK4 stage times.
struct GeodesicPath {
  std::vector<Vec> points;      // 2 * field_steps + 1 nodes
  std::vector<Vec> velocities;  // matching velocities
  double dt = 0.0;              // node spacing
  int field_steps = 0;

  double duration() const { return dt * static_cast<double>(points.size() - 1); }
  double field_step() const { return 2.0 * dt; }
};

/// Fixed-step RK4 geodesic integration in per-step orthographic charts.
/// Throws if field_steps < 2.
GeodesicPath integrate_geodesic(const MetricField& m, const Vec& p0, const Vec& v0, double T,
                                int field_steps, const FdConfig& cfg = {});

int steps_for(double T, const FdConfig& cfg);

/// Max relative drift of |c'|_m along the path.
double speed_drift(const MetricField& m, const GeodesicPath& path);

struct FieldAlongCurve {
  std::vector<Vec> values;  // at field nodes, times i * h
  double h = 0.0;
};

/// Ambient linear operator attached to a path node; the transported field w
/// solves nabla_{c'} w = M(node) w.
using NodeOperator = std::function<Mat(int node, const Vec& p, const Vec& v)>;
using Stabilizer = std::function<Vec(const Vec& p, const Vec& w)>;

/// RK4 integration of a linear first-order field equation along the path.
/// `op` may be null (parallel transport); `stabilize` is applied to the field
/// value after each step when cfg.proj_stabilize is set.
FieldAlongCurve integrate_transport(const MetricField& m, const GeodesicPath& path, const Vec& w0,
                                    const NodeOperator& op, const Stabilizer& stabilize,
                                    const FdConfig& cfg = {});

FieldAlongCurve parallel_transport(const MetricField& m, const GeodesicPath& path, const Vec& w0,
                                   const FdConfig& cfg = {});

struct JacobiField {
  std::vector<Vec> values;
  std::vector<Vec> derivatives;  // nabla_{c'} J at field nodes
  double h = 0.0;
};

/// Jacobi equation J'' + R(J, c')c' = 0 along a geodesic, with the curvature
/// operator sampled per node from CurvatureProbe.
JacobiField integrate_jacobi(const MetricField& m, const GeodesicPath& path, const Vec& J0,
                             const Vec& Jdot0, const FdConfig& cfg = {});

/// Closed-form geodesics and parallel transport on a single-factor sphere
/// with the induced round metric (used for base manifolds).
Vec sphere_geodesic(const SphereProduct& sph, const Vec& b0, const Vec& w, double s);
Vec sphere_parallel(const SphereProduct& sph, const Vec& b0, const Vec& w, double s,
                    const Vec& u0);

}  // namespace curvlab
