#pragma once

#include <array>
#include <functional>
#include <vector>

#include "curvlab/manifold.hpp"
#include "curvlab/metric.hpp"

namespace curvlab {

/// Numerical knobs shared by the finite-difference and ODE machinery.
/// fd_step_first drives first metric derivatives (Christoffels, brackets);
/// fd_step_second drives second derivatives (Riemann, tensor derivatives
/// along curves, whose sampled values already carry first-order FD noise).
struct FdConfig {
  double fd_step_first = 1e-4;
  double fd_step_second = 1e-3;
  int rk4_steps_per_unit = 2000;
  bool richardson = false;
  bool proj_stabilize = true;
};

/// Gamma^k_{ij}, stored as one (i, j) matrix per upper index k.
using Christoffel = std::vector<Mat>;

Mat gram_in_chart(const MetricField& m, const Chart& chart, const Vec& x);

/// Christoffel symbols at chart position x from central differences of the
/// pulled-back metric. Throws if the metric Gram is singular there.
Christoffel christoffel_in_chart(const MetricField& m, const Chart& chart, const Vec& x,
                                 double h1);

/// Christoffel symbols at p in the orthographic chart centered at p.
Christoffel christoffel(const MetricField& m, const Vec& p, const FdConfig& cfg = {});

/// Gamma(u, v) contraction, one component per upper index.
Vec christoffel_apply(const Christoffel& g, const Vec& u, const Vec& v);

/// Riemann tensor evaluator at a fixed point: precomputes chart, Gamma and
/// its derivatives once, then contracts against arbitrary tangent vectors.
/// Sign convention: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z
/// - nabla_[X,Y] Z, and riemann4(X,Y,Z,W) = g(R(X,Y)Z, W), so that
/// riemann4(X,Y,Y,X) is the unreduced sectional curvature (round sphere: +1).
class CurvatureProbe {
 public:
  CurvatureProbe(const MetricField& m, const Vec& p, const FdConfig& cfg = {});

  Vec riemann(const Vec& X, const Vec& Y, const Vec& Z) const;
  double riemann4(const Vec& X, const Vec& Y, const Vec& Z, const Vec& W) const;
  double sectional(const Vec& X, const Vec& Y, bool reduced = false) const;

  const Chart& chart() const { return chart_; }
  const Mat& gram0() const { return gram0_; }

 private:
  Chart chart_;
  Mat gram0_;
  Christoffel gamma_;
  std::vector<Christoffel> dgamma_;  // dgamma_[i] = d Gamma / d x^i
};

double sectional(const MetricField& m, const Vec& p, const Vec& X, const Vec& Y,
                 bool reduced = false, const FdConfig& cfg = {});

/// d f(X) by a central difference along the retraction curve of X.
double differential(const MetricField& m, const std::function<double(const Vec&)>& f,
                    const Vec& p, const Vec& X, const FdConfig& cfg = {});

/// m-gradient of f at p (ambient representation).
Vec gradient(const MetricField& m, const std::function<double(const Vec&)>& f, const Vec& p,
             const FdConfig& cfg = {});

/// Hessian of f at p evaluated on (X, X), with the Christoffel correction.
double hessian_quadratic(const MetricField& m, const std::function<double(const Vec&)>& f,
                         const Vec& p, const Vec& X, const FdConfig& cfg = {});

/// Covariant derivative at s = 0 of a field along a curve, from samples at
/// s = -h, 0, +h: central difference of chart components plus Gamma(v, w).
Vec covariant_derivative_3pt(const MetricField& m, const Vec& p, const Vec& velocity,
                             const Vec& p_minus, const Vec& p_plus, const Vec& w_minus,
                             const Vec& w0, const Vec& w_plus, double h,
                             const FdConfig& cfg = {});

/// Same, generating the curve by retraction of the velocity and the field
/// values by a callback.
Vec covariant_derivative_of_field(const MetricField& m, const Vec& p, const Vec& velocity,
                                  const std::function<Vec(const Vec&)>& field, double h,
                                  const FdConfig& cfg = {});

}  // namespace curvlab
