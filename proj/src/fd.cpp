#include "curvlab/fd.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace curvlab {

Mat gram_in_chart(const MetricField& m, const Chart& chart, const Vec& x) {
  const Mat J = chart.pushforward(x);
  const Mat G = m.gram(chart.point(x));
  Mat out = J.transpose() * G * J;
  return 0.5 * (out + out.transpose());
}

Christoffel christoffel_in_chart(const MetricField& m, const Chart& chart, const Vec& x,
                                 double h1) {
  const int d = chart.dim();
  const Mat g0 = gram_in_chart(m, chart, x);
  Eigen::LDLT<Mat> ldlt(g0);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw std::runtime_error("christoffel: metric Gram matrix is singular at this point");

  std::vector<Mat> dg(d);  // dg[k] = d g_ij / d x^k
  Vec e = Vec::Zero(d);
  for (int k = 0; k < d; ++k) {
    e[k] = h1;
    const Mat gp = gram_in_chart(m, chart, x + e);
    const Mat gm = gram_in_chart(m, chart, x - e);
    e[k] = 0.0;
    dg[k] = (gp - gm) / (2.0 * h1);
  }

  Christoffel gamma(d, Mat::Zero(d, d));
  Mat first = Mat::Zero(d, d);
  for (int l = 0; l < d; ++l) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) {
        first(i, j) = first(j, i) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      }
    // first(i,j) currently holds Gamma_{ij,l}; accumulate g^{kl} Gamma_{ij,l}.
    const Vec ginv_col = ldlt.solve(Vec::Unit(d, l));
    for (int k = 0; k < d; ++k) gamma[k] += ginv_col[k] * first;
  }
  return gamma;
}

Christoffel christoffel(const MetricField& m, const Vec& p, const FdConfig& cfg) {
  Chart chart(m.domain(), p);
  return christoffel_in_chart(m, chart, Vec::Zero(chart.dim()), cfg.fd_step_first);
}

Vec christoffel_apply(const Christoffel& g, const Vec& u, const Vec& v) {
  const int d = static_cast<int>(g.size());
  Vec out(d);
  for (int k = 0; k < d; ++k) out[k] = u.dot(g[k] * v);
  return out;
}

namespace {

std::vector<Christoffel> gamma_derivatives(const MetricField& m, const Chart& chart,
                                           const FdConfig& cfg) {
  const int d = chart.dim();
  const double h2 = cfg.fd_step_second;
  const double h1 = cfg.fd_step_first;
  std::vector<Christoffel> dg(d);
  Vec e = Vec::Zero(d);
  auto diff_at = [&](double h) {
    std::vector<Christoffel> out(d);
    for (int i = 0; i < d; ++i) {
      e[i] = h;
      const Christoffel gp = christoffel_in_chart(m, chart, e, h1);
      const Christoffel gm = christoffel_in_chart(m, chart, -e, h1);
      e[i] = 0.0;
      out[i].resize(d);
      for (int k = 0; k < d; ++k) out[i][k] = (gp[k] - gm[k]) / (2.0 * h);
    }
    return out;
  };
  dg = diff_at(h2);
  if (cfg.richardson) {
    const std::vector<Christoffel> fine = diff_at(0.5 * h2);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) dg[i][k] = (4.0 * fine[i][k] - dg[i][k]) / 3.0;
  }
  return dg;
}

}  // namespace

CurvatureProbe::CurvatureProbe(const MetricField& m, const Vec& p, const FdConfig& cfg)
    : chart_(m.domain(), p) {
  gram0_ = gram_in_chart(m, chart_, Vec::Zero(chart_.dim()));
  gamma_ = christoffel_in_chart(m, chart_, Vec::Zero(chart_.dim()), cfg.fd_step_first);
  dgamma_ = gamma_derivatives(m, chart_, cfg);
}

Vec CurvatureProbe::riemann(const Vec& X, const Vec& Y, const Vec& Z) const {
  const int d = chart_.dim();
  const Vec x = chart_.frame().transpose() * X;
  const Vec y = chart_.frame().transpose() * Y;
  const Vec z = chart_.frame().transpose() * Z;

  // R(X,Y)Z = d_X Gamma(Y,Z) - d_Y Gamma(X,Z) + Gamma(X, Gamma(Y,Z)) - Gamma(Y, Gamma(X,Z))
  Vec dxg = Vec::Zero(d), dyg = Vec::Zero(d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      dxg[k] += x[i] * y.dot(dgamma_[i][k] * z);
      dyg[k] += y[i] * x.dot(dgamma_[i][k] * z);
    }
  }
  const Vec gyz = christoffel_apply(gamma_, y, z);
  const Vec gxz = christoffel_apply(gamma_, x, z);
  Vec comps = dxg - dyg;
  comps += christoffel_apply(gamma_, x, gyz) - christoffel_apply(gamma_, y, gxz);
  return chart_.frame() * comps;
}

double CurvatureProbe::riemann4(const Vec& X, const Vec& Y, const Vec& Z, const Vec& W) const {
  const Vec r = chart_.frame().transpose() * riemann(X, Y, Z);
  const Vec w = chart_.frame().transpose() * W;
  return r.dot(gram0_ * w);
}

double CurvatureProbe::sectional(const Vec& X, const Vec& Y, bool reduced) const {
  const double unreduced = riemann4(X, Y, Y, X);
  if (!reduced) return unreduced;
  const Vec x = chart_.frame().transpose() * X;
  const Vec y = chart_.frame().transpose() * Y;
  const double xx = x.dot(gram0_ * x), yy = y.dot(gram0_ * y), xy = x.dot(gram0_ * y);
  const double gram_det = xx * yy - xy * xy;
  if (gram_det < 1e-10) throw std::invalid_argument("degenerate plane");
  return unreduced / gram_det;
}

double sectional(const MetricField& m, const Vec& p, const Vec& X, const Vec& Y, bool reduced,
                 const FdConfig& cfg) {
  return CurvatureProbe(m, p, cfg).sectional(X, Y, reduced);
}

double differential(const MetricField& m, const std::function<double(const Vec&)>& f,
                    const Vec& p, const Vec& X, const FdConfig& cfg) {
  const double h = cfg.fd_step_first;
  const auto& dom = m.domain();
  return (f(dom.retract(p, h * X)) - f(dom.retract(p, -h * X))) / (2.0 * h);
}

Vec gradient(const MetricField& m, const std::function<double(const Vec&)>& f, const Vec& p,
             const FdConfig& cfg) {
  Chart chart(m.domain(), p);
  const int d = chart.dim();
  const double h = cfg.fd_step_first;
  Vec df(d);
  Vec e = Vec::Zero(d);
  for (int i = 0; i < d; ++i) {
    e[i] = h;
    df[i] = (f(chart.point(e)) - f(chart.point(-e))) / (2.0 * h);
    e[i] = 0.0;
  }
  const Mat g0 = gram_in_chart(m, chart, Vec::Zero(d));
  return chart.frame() * g0.ldlt().solve(df);
}

double hessian_quadratic(const MetricField& m, const std::function<double(const Vec&)>& f,
                         const Vec& p, const Vec& X, const FdConfig& cfg) {
  Chart chart(m.domain(), p);
  const int d = chart.dim();
  const double h = cfg.fd_step_second;
  const Vec x = chart.frame().transpose() * X;

  const double f0 = f(p);
  const double fp = f(chart.point(h * x));
  const double fm = f(chart.point(-h * x));
  const double second = (fp - 2.0 * f0 + fm) / (h * h);

  const double h1 = cfg.fd_step_first;
  Vec df(d);
  Vec e = Vec::Zero(d);
  for (int i = 0; i < d; ++i) {
    e[i] = h1;
    df[i] = (f(chart.point(e)) - f(chart.point(-e))) / (2.0 * h1);
    e[i] = 0.0;
  }
  const Christoffel gamma = christoffel_in_chart(m, chart, Vec::Zero(d), h1);
  return second - df.dot(christoffel_apply(gamma, x, x));
}

Vec covariant_derivative_3pt(const MetricField& m, const Vec& p, const Vec& velocity,
                             const Vec& p_minus, const Vec& p_plus, const Vec& w_minus,
                             const Vec& w0, const Vec& w_plus, double h, const FdConfig& cfg) {
  Chart chart(m.domain(), p);
  const Vec wm = chart.vector_coords(chart.coords_of(p_minus), w_minus);
  const Vec wp = chart.vector_coords(chart.coords_of(p_plus), w_plus);
  const Vec w0c = chart.frame().transpose() * w0;
  const Vec vc = chart.frame().transpose() * velocity;
  const Christoffel gamma =
      christoffel_in_chart(m, chart, Vec::Zero(chart.dim()), cfg.fd_step_first);
  const Vec comps = (wp - wm) / (2.0 * h) + christoffel_apply(gamma, vc, w0c);
  return chart.frame() * comps;
}

Vec covariant_derivative_of_field(const MetricField& m, const Vec& p, const Vec& velocity,
                                  const std::function<Vec(const Vec&)>& field, double h,
                                  const FdConfig& cfg) {
  const auto& dom = m.domain();
  const Vec pm = dom.retract(p, -h * velocity);
  const Vec pp = dom.retract(p, h * velocity);
  return covariant_derivative_3pt(m, p, velocity, pm, pp, field(pm), field(p), field(pp), h, cfg);
}

}  // namespace curvlab
