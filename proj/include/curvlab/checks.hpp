#pragma once

#include "curvlab/cheeger.hpp"
#include "curvlab/oneill.hpp"

namespace curvlab {

/// Orthonormal vertizontal frame at p: X, Y horizontal, V vertical, all
/// m-orthonormal; u is the algebra element with u*(p) parallel to V.
struct VertizontalFrame {
  Vec p;
  Vec X;
  Vec Y;
  Vec V;
  AlgebraVector u;
};

/// Margin of the positivity condition for connection metrics,
///   K_B(X,Y) |A*_X u*|^2 - <u*, (nabla_X A)_X Y>^2,
/// for orthonormal horizontal lifts X, Y and a nonzero algebra element u.
/// K_B is the closed-form base curvature for the reference metric and the
/// horizontal curvature identity K_m + 3|A_X Y|^2 otherwise.
double cdr_margin(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X, const Vec& Y,
                  const AlgebraVector& u, const FdConfig& cfg = {});

/// The same condition phrased through the curvature 2-form of the connection,
///   R^h(X,Y,Y,X) sum_k <u, Omega(X, X_k)>^2 - <u, (nabla_X Omega)(X,Y)>^2,
/// with Omega(X,Y)* = -2 A_X Y and an orthonormal base frame {X_k}. The
/// covariant derivative of Omega is taken along the base geodesic of dpi(X).
/// Pass base_frame to override the constructed orthonormal frame.
double cdr_original_margin(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                           const Vec& Y, const AlgebraVector& u, const FdConfig& cfg = {},
                           const Mat* base_frame = nullptr);

/// Weak nonnegativity margin tau |X|^2 |A*_X V|^2 - <(nabla_X A*)_X V
/// + A*_X S_X V, A*_X V>, evaluated with V extended as a holonomy field.
/// If varfim_residual is given it receives the gap between the right-hand
/// side and 1/2 X|A*_X V|^2 + 2 <A*_X S_X V, A*_X V>.
double wnn_residual(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X, const Vec& V,
                    double tau, const FdConfig& cfg = {}, double* varfim_residual = nullptr);

/// max over the vertical geodesic of V on [0,T] of
/// |nabla_{g'}(A*_X g') + A*_{A*_X g'} g'|, the basic-field equation for
/// A*_X V. Requires totally geodesic fibers (|S| < 1e-4 measured).
double check_basic_astar(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                         const Vec& V, double T, const FdConfig& cfg = {});

struct GoodTripleResult {
  double mismatch;     // max grid distance |exp(s V(t)) - exp(t X(s))|
  double scale;        // |A*_X V| used for the initial derivative
};

/// Doubly-ruled-surface test for the triple {X, V, -A*_X V}: integrates both
/// Jacobi families and compares the two exponential surfaces on a grid.
/// With wrong_initial set, uses 0 instead of -A*_X V (negative control).
GoodTripleResult check_good_triple(const Bundle& b, const MetricField& m, const Vec& p,
                                   const Vec& X, const Vec& V, double s_max, double t_max,
                                   int grid, const FdConfig& cfg = {}, bool wrong_initial = false);

struct TappResiduals {
  double vertizontal_plane;  // |R(X, A*_X V, A*_X V, V)|
  double mixed_identity;     // |R(X, V, A*_X V, Y) - <nabla_X A*_Y V, A*_X V>|
  double fat_plane;          // |R(X, V, A*_X V, X)|, meaningful when fat
  bool fat;
};

/// Curvature identities for totally geodesic foliations on a vertizontal
/// frame (gating on |S| is the caller's responsibility).
TappResiduals check_theorem_tapp(const Bundle& b, const MetricField& m,
                                 const VertizontalFrame& frame, const FdConfig& cfg = {});

struct CorollaryFlatResiduals {
  double kernel_plane;  // |R(X, Y, Y, V)| for Y in ker A_X
  double basic_plane;   // |R(X, Y, Y, V)| for generic basic Y (fat case)
  bool fat;
};

CorollaryFlatResiduals check_corollary_flat(const Bundle& b, const MetricField& m,
                                            const VertizontalFrame& frame,
                                            const FdConfig& cfg = {});

/// Max interior residual of
///   K(c', nu) = 1/2 (d^2/dt^2)|nu|^2 - 3|S_{c'} nu|^2 + |A*_{c'} nu|^2
/// for the dual holonomy field nu with nu(0) = V along the geodesic of X.
double check_k_identity(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                        const Vec& V, double T, const FdConfig& cfg = {});

/// Dual-holonomy invariance between two metrics adapted to the same
/// horizontal geometry: integrates nu (in m1, from P nu0) and nu' (in m2,
/// from nu0) along the horizontal geodesic of X and returns
/// max_t |Adag_{c'} nu'(t) - A*_{c'} nu(t)|.
double dual_inv_check(const Bundle& b, const MetricField& m1, const MetricField& m2, const Vec& p,
                      const Vec& X, const Vec& nu0, double T, const FdConfig& cfg = {});

enum class PlaneKind { HorizontalHorizontal, VerticalVertical, Vertizontal };

/// Closed-form sectional curvature of the vertical warping m_h, evaluated
/// from unwarped data (curvatures, A*, S, sigma, dh, Hess h). Unreduced on
/// the given vectors. Throws for non-basic h and for vv pairs that are not
/// m-orthogonal.
double warped_sectional(const Bundle& b, const MetricField& m, const BasicScalar& h, const Vec& p,
                        PlaneKind kind, const Vec& v1, const Vec& v2, const FdConfig& cfg = {});

/// 162 unit directions in the algebra (twice-subdivided icosahedron).
std::vector<AlgebraVector> algebra_grid_162();

}  // namespace curvlab
