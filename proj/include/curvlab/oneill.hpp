#pragma once

#include "curvlab/bundle.hpp"
#include "curvlab/fd.hpp"
#include "curvlab/ode.hpp"

namespace curvlab {

/// A_X Y = 1/2 [Xt, Yt]^v for horizontal X, Y, with basic extensions Xt, Yt
/// (horizontal lifts of base fields). Metric independent; the bracket is
/// evaluated by central differences along retraction curves.
Vec a_tensor(const Bundle& b, const Vec& p, const Vec& X, const Vec& Y, const FdConfig& cfg = {});

/// All pairwise values A_{H_i} H_j for the columns of a horizontal frame H,
/// returned as an array indexed [i][j] (antisymmetry is used, i < j computed).
std::vector<std::vector<Vec>> a_pairwise(const Bundle& b, const Vec& p, const Mat& H,
                                         const FdConfig& cfg = {});

/// m-dual of A: <A*_X v, Y>_m = <A_X Y, v>_m. Returned as an ambient operator
/// acting on vertical vectors.
Mat a_star_operator(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
                    const FdConfig& cfg = {});
Vec a_star(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X, const Vec& V,
           const FdConfig& cfg = {});

/// Second fundamental form of the fibers, S_X xi = -(nabla_xi Xt)^v.
Vec s_tensor(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X, const Vec& V,
             const FdConfig& cfg = {});
Mat s_operator(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
               const FdConfig& cfg = {});

/// m-dual of S: the horizontal vector sigma(V, W) with
/// <sigma(V,W), X>_m = <S_X V, W>_m (the fibers' vector-valued second
/// fundamental form).
Vec sigma_form(const Bundle& b, const MetricField& m, const Vec& p, const Vec& V, const Vec& W,
               const FdConfig& cfg = {});

/// Largest |S_X V|_m over an m-orthonormal frame at p (totally geodesic
/// fibers gate).
double s_tensor_magnitude(const Bundle& b, const MetricField& m, const Vec& p,
                          const FdConfig& cfg = {});

/// Holonomy-type fields along a horizontal geodesic:
///   holonomy       nabla_{c'} xi = -A*_{c'} xi - S_{c'} xi
///   dual holonomy  nabla_{c'} nu = -A*_{c'} nu + S_{c'} nu
/// Throws if the path is not horizontal.
FieldAlongCurve holonomy_field(const Bundle& b, const MetricField& m, const GeodesicPath& path,
                               const Vec& xi0, const FdConfig& cfg = {});
FieldAlongCurve dual_holonomy_field(const Bundle& b, const MetricField& m,
                                    const GeodesicPath& path, const Vec& nu0,
                                    const FdConfig& cfg = {});

/// Basic horizontal fields along a vertical geodesic:
///   nabla_{g'} X = -A*_X g' - S_X g'.
/// Throws if the path is not vertical.
FieldAlongCurve basic_field(const Bundle& b, const MetricField& m, const GeodesicPath& path,
                            const Vec& X0, const FdConfig& cfg = {});

/// (nabla_X A)_X Y, computed by finite differences of A along the geodesic of
/// X with parallel-transported arguments (route one), cross-checked against
/// the curvature identity <(nabla_X A)_X Y, V> = R(X, Y, V, X) (route two).
/// Returns route one; *cross_residual receives the max component gap.
Vec nabla_a(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X, const Vec& Y,
            const FdConfig& cfg = {}, double* cross_residual = nullptr);

/// Orthonormal basis of ker A_X inside the horizontal space (SVD threshold
/// 1e-6 relative; a vanishing A yields the whole horizontal space).
Mat kernel_a_x(const Bundle& b, const MetricField& m, const Vec& p, const Vec& X,
               const FdConfig& cfg = {});

struct FatnessCertificate {
  Vec p;
  Vec V;
  Mat omega;           // omega_V(X_i, X_j) = m(A_{X_i} X_j, V) on an orthonormal frame
  double min_abs_det;  // |det omega|
  bool fat;            // |det| > 1e-8 and dim H even
};

FatnessCertificate fatness_check(const Bundle& b, const MetricField& m, const Vec& p, const Vec& V,
                                 const FdConfig& cfg = {});

}  // namespace curvlab
