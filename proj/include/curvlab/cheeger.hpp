#pragma once

#include <memory>

#include "curvlab/bundle.hpp"
#include "curvlab/fd.hpp"
#include "curvlab/oneill.hpp"

namespace curvlab {

/// Symmetric positive-definite operator P on the algebra with
/// g(u*, v*) = Q(P u, v). Throws when the orbit Gram is near singular
/// (the action would not be free).
Eigen::Matrix3d orbit_tensor(const Bundle& b, const MetricField& m, const Vec& p);

/// P_t = (P^{-1} + t)^{-1} = P (1 + t P)^{-1}, t >= 0.
Eigen::Matrix3d p_t(const Eigen::Matrix3d& P, double t);

/// Decomposition Xbar = X + u*(p) with X horizontal.
struct DeformedDecomposition {
  Vec horizontal;
  AlgebraVector u;
};
DeformedDecomposition decompose(const Bundle& b, const Vec& p, const Vec& xbar);

/// Metric tensor of the deformation: C_t(X + u*) = X + ((1 + tP)^{-1} u)*.
Vec c_t_apply(const Bundle& b, const MetricField& m, const Vec& p, const Vec& xbar, double t);
Vec c_t_inverse_apply(const Bundle& b, const MetricField& m, const Vec& p, const Vec& xbar,
                      double t);

/// Cheeger deformation g_t of m: g_t(Xbar, Ybar) = m(C_t Xbar, Ybar).
MetricField cheeger_metric(const std::shared_ptr<const Bundle>& b, const MetricField& m, double t);

/// Fiber-rescaled family gt~ = t * g_t|_V + m|_H, t > 0. As t grows the
/// vertical Gram converges to Q and the fibers become totally geodesic.
MetricField regularized_metric(const std::shared_ptr<const Bundle>& b, const MetricField& m,
                               double t);

/// Positive basic function on the total space (constant on fibers).
struct BasicScalar {
  std::string descriptor;
  std::function<double(const Vec&)> value;
};
BasicScalar constant_scalar(double c);
/// h(p) = offset + <pi(p), axis>: the pullback of a base coordinate.
BasicScalar affine_scalar(const std::shared_ptr<const Bundle>& b, double offset = 2.0,
                          int axis = 0);

/// Vertical warping m_h = m|_H + h^{-1} m|_V.
MetricField warped_metric(const std::shared_ptr<const Bundle>& b, const MetricField& m,
                          const BasicScalar& h);

/// Algebra element of P nabla^v_{Xbar} Ybar with the invariant extensions
/// (vertical parts as action fields, horizontal parts as basic fields).
AlgebraVector vertical_derivative_algebra(const Bundle& b, const MetricField& m, const Vec& p,
                                          const Vec& xbar, const Vec& ybar,
                                          const FdConfig& cfg = {});

/// z_t correction term: 3t |(1+tP)^{-1/2} P nv - (1+tP)^{-1/2} (t/2)[Pu, Pv]|_Q^2.
double z_t_term(const Bundle& b, const MetricField& m, const Vec& p, const Vec& xbar,
                const Vec& ybar, double t, const FdConfig& cfg = {});

/// Closed-form deformed curvature
///   kappa_t = kappa_0 + (t^3/4) |[Pu, Pv]|_Q^2 + z_t,
/// where kappa_0 is the finite-difference unreduced curvature of m. Matches
/// R_{g_t}(C_t^{-1} Xbar, C_t^{-1} Ybar, C_t^{-1} Ybar, C_t^{-1} Xbar).
double kappa_t(const Bundle& b, const MetricField& m, const Vec& p, const Vec& xbar,
               const Vec& ybar, double t, const FdConfig& cfg = {});

/// t -> infinity limit of the rescaled dual tensor: V -> A*_X (P^{-1} V),
/// as an ambient operator on the vertical space.
Mat limit_dual_a(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                 const FdConfig& cfg = {});

/// Sectional curvature of the base family induced by the rescaled metrics:
///   K_B(t) = K_m(X,Y) + 3t |(1+tP)^{-1/2} P a|_Q^2 + 3 |(1+tP)^{-1/2} a|_m^2
/// with a the algebra element of A_X Y.
double base_curvature_family(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                             const Vec& Y, double t, const FdConfig& cfg = {});
double base_curvature_family_limit(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                                   const Vec& Y, const FdConfig& cfg = {});

}  // namespace curvlab
