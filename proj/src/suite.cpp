#include "curvlab/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "curvlab/bundle.hpp"
#include "curvlab/checks.hpp"
#include "curvlab/cheeger.hpp"
#include "curvlab/sampling.hpp"

namespace curvlab {

namespace {

struct SuiteDefaults {
  int samples = 20;
  std::vector<double> t_list = {0.1, 1.0, 10.0};
  std::map<std::string, double> tolerances;
  std::map<std::string, double> params;
  int steps_per_unit = 2000;  // many suites integrate nothing long
};

SuiteDefaults defaults_for(const std::string& name) {
  SuiteDefaults d;
  if (name == "riemann-symmetries") {
    d.samples = 12;
    d.tolerances = {{"symmetry", 1e-6}};
  } else if (name == "cheeger-formula-vs-oracle") {
    d.samples = 25;
    d.tolerances = {{"relative", 1e-3}};
  } else if (name == "fatness") {
    d.samples = 40;
    d.tolerances = {{"det_floor", 1e-8}};
  } else if (name == "cdr") {
    d.samples = 25;
    d.tolerances = {{"strict_margin", 1e-9}};
  } else if (name == "wnn") {
    d.samples = 20;
    d.tolerances = {{"wnn", 1e-6}, {"reduction", 1e-3}};
    d.params = {{"tau", 1.0}};
  } else if (name == "tapp-identities") {
    d.samples = 15;
    d.tolerances = {{"identity", 1e-3}};
  } else if (name == "corollary-flat") {
    d.samples = 15;
    d.tolerances = {{"identity", 1e-3}};
  } else if (name == "k-identity") {
    d.samples = 5;
    d.tolerances = {{"identity", 1e-3}};
    d.params = {{"T", 1.0}};
    d.steps_per_unit = 250;
  } else if (name == "dual-inv") {
    d.samples = 5;
    d.tolerances = {{"identity", 1e-3}};
    d.params = {{"T", 1.0}};
    d.steps_per_unit = 250;
  } else if (name == "good-triple") {
    d.samples = 2;
    d.tolerances = {{"mismatch", 1e-4}, {"control_floor", 1e-2}};
    d.params = {{"s_max", 0.5}, {"t_max", 0.5}, {"grid", 32.0}};
    d.steps_per_unit = 192;
  } else if (name == "basicness") {
    d.samples = 4;
    d.tolerances = {{"basic", 1e-3}, {"projectable", 1e-5}, {"norm_drift", 1e-5}};
    d.params = {{"T", 1.0}};
    d.steps_per_unit = 250;
  } else if (name == "warping") {
    d.samples = 15;
    d.tolerances = {{"agreement", 1e-2}};
  } else if (name == "regularization-decay") {
    d.samples = 6;
    d.t_list = {10.0, 100.0, 1000.0};
    d.tolerances = {{"s_final", 1e-3}, {"base_floor", 1e-2}};
  } else if (name == "holonomy-bounded") {
    d.samples = 3;
    d.tolerances = {{"ratio", 2.0}};
    d.params = {{"T", 10.0}};
    d.steps_per_unit = 200;
  }
  return d;
}

struct SuiteContext {
  std::string name;
  std::shared_ptr<const Bundle> bundle;
  MetricField metric;
  int samples = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  std::vector<double> t_list;
  FdConfig engine;
  std::map<std::string, double> tolerances;
  std::map<std::string, double> params;

  double tol(const std::string& key) const { return tolerances.at(key); }
  double param(const std::string& key) const { return params.at(key); }
  Pcg32 rng_for(int sample) const { return Pcg32(seed, 1000003ULL * sample + 17ULL); }
};

SuiteContext make_context(const std::string& name, const SuiteConfig& cfg) {
  const SuiteDefaults d = defaults_for(name);
  SuiteContext ctx;
  ctx.name = name;
  ctx.bundle = make_bundle(cfg.bundle);
  ctx.metric = make_metric(ctx.bundle, cfg.metric);
  ctx.samples = cfg.samples.value_or(d.samples);
  if (ctx.samples < 1) throw std::invalid_argument("sample count must be >= 1");
  ctx.seed = cfg.seed;
  ctx.workers = std::max(1, cfg.workers);
  ctx.t_list = cfg.t_list.empty() ? d.t_list : cfg.t_list;
  ctx.engine = cfg.engine;
  if (!cfg.steps_overridden) ctx.engine.rk4_steps_per_unit = d.steps_per_unit;
  ctx.tolerances = d.tolerances;
  for (const auto& [k, v] : cfg.tolerances) {
    if (v <= 0.0) throw std::invalid_argument("tolerance '" + k + "' must be positive");
    ctx.tolerances[k] = v;
  }
  ctx.params = d.params;
  for (const auto& [k, v] : cfg.params) ctx.params[k] = v;
  return ctx;
}

nlohmann::ordered_json echo_config(const SuiteContext& ctx, const SuiteConfig& cfg) {
  nlohmann::ordered_json j;
  j["bundle"] = cfg.bundle;
  j["metric"] = ctx.metric.descriptor();
  j["samples"] = ctx.samples;
  j["seed"] = ctx.seed;
  j["workers"] = ctx.workers;
  j["t"] = ctx.t_list;
  j["tolerances"] = ctx.tolerances;
  j["params"] = ctx.params;
  j["engine"] = {{"fd_step_first", ctx.engine.fd_step_first},
                 {"fd_step_second", ctx.engine.fd_step_second},
                 {"rk4_steps_per_unit", ctx.engine.rk4_steps_per_unit},
                 {"richardson", ctx.engine.richardson},
                 {"proj_stabilize", ctx.engine.proj_stabilize}};
  return j;
}

std::string fmt_vec(const Vec& v) {
  std::ostringstream os;
  os.precision(9);
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
  return os.str();
}

/// Deterministic parallel map: worker w handles samples w, w+k, w+2k, ...;
/// results land in an index-addressed vector regardless of scheduling.
void parallel_samples(int n, int workers,
                      const std::function<std::vector<SampleRecord>(int)>& body,
                      std::vector<SampleRecord>& out) {
  std::vector<std::vector<SampleRecord>> buckets(n);
  auto run_range = [&](int w) {
    for (int i = w; i < n; i += workers) {
      try {
        buckets[i] = body(i);
      } catch (const std::exception& e) {
        SampleRecord r;
        r.id = i;
        r.passed = false;
        r.note = std::string("error: ") + e.what();
        buckets[i] = {r};
      }
    }
  };
  if (workers <= 1) {
    run_range(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
    for (auto& t : pool) t.join();
  }
  for (auto& bucket : buckets)
    for (auto& r : bucket) out.push_back(std::move(r));
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
}

CheckReport run_sampled(const SuiteContext& ctx, const SuiteConfig& cfg,
                        const std::function<std::vector<SampleRecord>(int)>& body,
                        const std::string& fail_verdict = "fail") {
  const auto t0 = std::chrono::steady_clock::now();
  CheckReport report;
  report.suite = ctx.name;
  report.config_echo = echo_config(ctx, cfg);
  parallel_samples(ctx.samples, ctx.workers, body, report.samples);
  report.finalize(fail_verdict);
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

SampleRecord make_record(double residual, double tolerance, const std::string& frame,
                         const std::string& note = "") {
  SampleRecord r;
  r.residual = residual;
  r.tolerance = tolerance;
  r.passed = residual <= tolerance;
  r.frame = frame;
  r.note = note;
  return r;
}

SampleRecord make_skipped(const std::string& note) {
  SampleRecord r;
  r.skipped = true;
  r.note = note;
  return r;
}

// ---------------------------------------------------------------------------
// Suite bodies
// ---------------------------------------------------------------------------

CheckReport suite_riemann_symmetries(const SuiteContext& ctx, const SuiteConfig& cfg) {
  return run_sampled(ctx, cfg, [&](int i) {
    Pcg32 rng = ctx.rng_for(i);
    const Vec p = sample_point(ctx.bundle->total(), rng);
    const MetricField& m = ctx.metric;
    Vec W[4];
    for (auto& w : W) w = sample_unit_tangent(ctx.bundle->total(), m, p, rng);
    CurvatureProbe probe(m, p, ctx.engine);

    const double r1234 = probe.riemann4(W[0], W[1], W[2], W[3]);
    double worst = std::abs(r1234 + probe.riemann4(W[1], W[0], W[2], W[3]));
    worst = std::max(worst, std::abs(r1234 + probe.riemann4(W[0], W[1], W[3], W[2])));
    worst = std::max(worst, std::abs(r1234 - probe.riemann4(W[2], W[3], W[0], W[1])));
    const Vec bianchi = probe.riemann(W[0], W[1], W[2]) + probe.riemann(W[1], W[2], W[0]) +
                        probe.riemann(W[2], W[0], W[1]);
    worst = std::max(worst, m.norm(p, bianchi));
    return std::vector<SampleRecord>{make_record(worst, ctx.tol("symmetry"), fmt_vec(p))};
  });
}

CheckReport suite_cheeger_oracle(const SuiteContext& ctx, const SuiteConfig& cfg) {
  std::vector<MetricField> deformed;
  for (double t : ctx.t_list) deformed.push_back(cheeger_metric(ctx.bundle, ctx.metric, t));

  return run_sampled(ctx, cfg, [&, deformed](int i) {
    Pcg32 rng = ctx.rng_for(i);
    const Bundle& b = *ctx.bundle;
    const MetricField& m = ctx.metric;
    const Vec p = sample_point(b.total(), rng);
    const Vec xbar = sample_unit_tangent(b.total(), m, p, rng);
    const Vec ybar = sample_unit_tangent(b.total(), m, p, rng);
    std::vector<SampleRecord> out;
    for (std::size_t k = 0; k < ctx.t_list.size(); ++k) {
      const double t = ctx.t_list[k];
      const double formula = kappa_t(b, m, p, xbar, ybar, t, ctx.engine);
      const Vec xp = c_t_inverse_apply(b, m, p, xbar, t);
      const Vec yp = c_t_inverse_apply(b, m, p, ybar, t);
      const double oracle = CurvatureProbe(deformed[k], p, ctx.engine).riemann4(xp, yp, yp, xp);
      const double scale = std::max({1.0, std::abs(formula), std::abs(oracle)});
      std::ostringstream note;
      note << "t=" << t;
      out.push_back(make_record(std::abs(formula - oracle) / scale, ctx.tol("relative"),
                                fmt_vec(p), note.str()));
    }
    return out;
  });
}

CheckReport suite_fatness(const SuiteContext& ctx, const SuiteConfig& cfg) {
  std::atomic<int> fat_count{0};
  auto report = run_sampled(ctx, cfg, [&](int i) {
    Pcg32 rng = ctx.rng_for(i);
    const Bundle& b = *ctx.bundle;
    const Vec p = sample_point(b.total(), rng);
    const Vec V = sample_unit_vertical(b, ctx.metric, p, rng);
    const FatnessCertificate cert = fatness_check(b, ctx.metric, p, V, ctx.engine);
    if (cert.fat) ++fat_count;
    SampleRecord r;
    r.residual = cert.min_abs_det;
    r.tolerance = ctx.tol("det_floor");
    r.passed = cert.fat;
    r.frame = fmt_vec(p);
    r.note = cert.fat ? "fat" : "degenerate";
    return std::vector<SampleRecord>{r};
  });
  if (!report.passed)
    report.verdict = (fat_count.load() == 0) ? "degenerate everywhere" : "mixed";
  return report;
}

CheckReport suite_cdr(const SuiteContext& ctx, const SuiteConfig& cfg) {
  const auto grid = algebra_grid_162();
  const bool deformable = ctx.metric.descriptor() != "reference";
  std::vector<MetricField> metrics;
  std::vector<double> ts;
  if (deformable && ctx.metric.descriptor() == "cheeger") {
    for (double t : ctx.t_list) {
      metrics.push_back(cheeger_metric(ctx.bundle, ctx.bundle->reference_metric(), t));
      ts.push_back(t);
    }
  } else {
    metrics.push_back(ctx.metric);
    ts.push_back(0.0);
  }

  return run_sampled(
      ctx, cfg,
      [&, metrics, ts](int i) {
        Pcg32 rng = ctx.rng_for(i);
        const Bundle& b = *ctx.bundle;
        std::vector<SampleRecord> out;
        for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
          const MetricField& m = metrics[mi];
          const Vec p = sample_point(b.total(), rng);
          auto [X, Y] = sample_horizontal_pair(b, m, p, rng);

          const double kb = [&] {
            if (m.descriptor() == "reference")
              return b.base_curvature_constant();  // orthonormal lifts: unit plane Gram
            const double k = CurvatureProbe(m, p, ctx.engine).riemann4(X, Y, Y, X);
            const Vec axy = a_tensor(b, p, X, Y, ctx.engine);
            return k + 3.0 * m.inner(p, axy, axy);
          }();
          const Mat astar_op = a_star_operator(b, m, p, X, ctx.engine);
          const Vec na = nabla_a(b, m, p, X, Y, ctx.engine, nullptr);
          const Mat G = m.gram(p);

          double min_margin = std::numeric_limits<double>::infinity();
          for (const AlgebraVector& u : grid) {
            const Vec ustar = b.action_vector_unchecked(p, u);
            const double lhs = kb * (astar_op * ustar).dot(G * (astar_op * ustar));
            const double pairing = ustar.dot(G * na);
            min_margin = std::min(min_margin, lhs - pairing * pairing);
          }
          SampleRecord r;
          r.residual = min_margin;
          r.tolerance = ctx.tol("strict_margin");
          r.passed = min_margin > ctx.tol("strict_margin");
          r.frame = fmt_vec(p);
          if (metrics.size() > 1) {
            std::ostringstream note;
            note << "t=" << ts[mi];
            r.note = note.str();
          }
          out.push_back(r);
        }
        return out;
      },
      "fail-strict");
}

CheckReport suite_wnn(const SuiteContext& ctx, const SuiteConfig& cfg) {
  return run_sampled(ctx, cfg, [&](int i) {
    Pcg32 rng = ctx.rng_for(i);
    const Bundle& b = *ctx.bundle;
    const MetricField& m = ctx.metric;
    const Vec p = sample_point(b.total(), rng);
    const Vec X = sample_unit_horizontal(b, m, p, rng);
    const Vec V = sample_unit_vertical(b, m, p, rng);
    double varfim = 0.0;
    const double margin = wnn_residual(b, m, p, X, V, ctx.param("tau"), ctx.engine, &varfim);
    std::vector<SampleRecord> out;
    out.push_back(make_record(std::max(0.0, -margin), ctx.tol("wnn"), fmt_vec(p), "wnn margin"));
    out.push_back(make_record(varfim, ctx.tol("reduction"), fmt_vec(p), "holonomy reduction"));
    return out;
  });
}

CheckReport suite_tapp(const SuiteContext& ctx, const SuiteConfig& cfg) {
  return run_sampled(ctx, cfg, [&](int i) {
    Pcg32 rng = ctx.rng_for(i);
    const Bundle& b = *ctx.bundle;
    const MetricField& m = ctx.metric;
    const VertizontalFrame frame = sample_frame(b, m, rng);
    if (s_tensor_magnitude(b, m, frame.p, ctx.engine) > 1e-4)
      return std::vector<SampleRecord>{make_skipped("n/a: fibers not totally geodesic")};
    const TappResiduals res = check_theorem_tapp(b, m, frame, ctx.engine);
    std::vector<SampleRecord> out;
    out.push_back(
        make_record(res.vertizontal_plane, ctx.tol("identity"), fmt_vec(frame.p), "R(X,A*V,A*V,V)"));
    out.push_back(
        make_record(res.mixed_identity, ctx.tol("identity"), fmt_vec(frame.p), "mixed identity"));
    if (res.fat)
      out.push_back(
          make_record(res.fat_plane, ctx.tol("identity"), fmt_vec(frame.p), "R(X,V,A*V,X)"));
    else
      out.push_back(make_skipped("n/a: not fat"));
    return out;
  });
}

CheckReport suite_corollary_flat(const SuiteContext& ctx, const SuiteConfig& cfg) {
  return run_sampled(ctx, cfg, [&](int i) {
    Pcg32 rng = ctx.rng_for(i);
    const Bundle& b = *ctx.bundle;
    const MetricField& m = ctx.metric;
    const VertizontalFrame frame = sample_frame(b, m, rng);
    if (s_tensor_magnitude(b, m, frame.p, ctx.engine) > 1e-4)
      return std::vector<SampleRecord>{make_skipped("n/a: fibers not totally geodesic")};
    const CorollaryFlatResiduals res = check_corollary_flat(b, m, frame, ctx.engine);
    std::vector<SampleRecord> out;
    out.push_back(
        make_record(res.kernel_plane, ctx.tol("identity"), fmt_vec(frame.p), "kernel plane"));
    if (res.fat)
      out.push_back(
          make_record(res.basic_plane, ctx.tol("identity"), fmt_vec(frame.p), "basic plane"));
    else
      out.push_back(make_skipped("n/a: not fat"));
    return out;
  });
}

CheckReport suite_k_identity(const SuiteContext& ctx, const SuiteConfig& cfg) {
  return run_sampled(ctx, cfg, [&](int i) {
    Pcg32 rng = ctx.rng_for(i);
    const Bundle& b = *ctx.bundle;
    const MetricField& m = ctx.metric;
    const Vec p = sample_point(b.total(), rng);
    const Vec X = sample_unit_horizontal(b, m, p, rng);
    const Vec V = sample_unit_vertical(b, m, p, rng);
    const double res = check_k_identity(b, m, p, X, V, ctx.param("T"), ctx.engine);
    return std::vector<SampleRecord>{make_record(res, ctx.tol("identity"), fmt_vec(p))};
  });
}

CheckReport suite_dual_inv(const SuiteContext& ctx, const SuiteConfig& cfg) {
  const MetricField m1 = ctx.bundle->reference_metric();
  const MetricField m2 = ctx.metric.descriptor() == "reference"
                             ? regularized_metric(ctx.bundle, m1, 2.0)
                             : ctx.metric;
  return run_sampled(ctx, cfg, [&, m1, m2](int i) {
    Pcg32 rng = ctx.rng_for(i);
    const Bundle& b = *ctx.bundle;
    const Vec p = sample_point(b.total(), rng);
    const Vec X = sample_unit_horizontal(b, m1, p, rng);
    const Vec nu0 = sample_unit_vertical(b, m1, p, rng);
    const double res = dual_inv_check(b, m1, m2, p, X, nu0, ctx.param("T"), ctx.engine);
    return std::vector<SampleRecord>{
        make_record(res, ctx.tol("identity"), fmt_vec(p), "vs " + m2.descriptor())};
  });
}

CheckReport suite_good_triple(const SuiteContext& ctx, const SuiteConfig& cfg) {
  return run_sampled(ctx, cfg, [&](int i) {
    Pcg32 rng = ctx.rng_for(i);
    const Bundle& b = *ctx.bundle;
    const MetricField& m = ctx.metric;
    const Vec p = sample_point(b.total(), rng);
    const Vec X = sample_unit_horizontal(b, m, p, rng);
    const Vec V = sample_unit_vertical(b, m, p, rng);
    const int grid = static_cast<int>(ctx.param("grid"));
    const auto good = check_good_triple(b, m, p, X, V, ctx.param("s_max"), ctx.param("t_max"),
                                        grid, ctx.engine, false);
    std::vector<SampleRecord> out;
    out.push_back(make_record(good.mismatch, ctx.tol("mismatch"), fmt_vec(p), "good triple"));
    if (good.scale > 1e-6) {
      const auto control = check_good_triple(b, m, p, X, V, ctx.param("s_max"),
                                             ctx.param("t_max"), grid, ctx.engine, true);
      SampleRecord r;
      r.residual = control.mismatch;
      r.tolerance = ctx.tol("control_floor");
      r.passed = control.mismatch > ctx.tol("control_floor");
      r.frame = fmt_vec(p);
      r.note = "negative control (wrong initial derivative)";
      out.push_back(r);
    } else {
      out.push_back(make_skipped("control n/a: A*_X V = 0"));
    }
    return out;
  });
}

CheckReport suite_basicness(const SuiteContext& ctx, const SuiteConfig& cfg) {
  return run_sampled(ctx, cfg, [&](int i) {
    Pcg32 rng = ctx.rng_for(i);
    const Bundle& b = *ctx.bundle;
    const MetricField& m = ctx.metric;
    const Vec p = sample_point(b.total(), rng);
    const Vec X = sample_unit_horizontal(b, m, p, rng);
    const Vec V = sample_unit_vertical(b, m, p, rng);
    std::vector<SampleRecord> out;
    if (s_tensor_magnitude(b, m, p, ctx.engine) > 1e-4) {
      out.push_back(make_skipped("n/a: fibers not totally geodesic"));
    } else {
      const double res = check_basic_astar(b, m, p, X, V, ctx.param("T"), ctx.engine);
      out.push_back(make_record(res, ctx.tol("basic"), fmt_vec(p), "A* basic along fiber"));
    }
    // Projectability of the basic-field solution along the vertical geodesic.
    const GeodesicPath fiber =
        integrate_geodesic(m, p, V, ctx.param("T"), steps_for(ctx.param("T"), ctx.engine), ctx.engine);
    const FieldAlongCurve Xs = basic_field(b, m, fiber, X, ctx.engine);
    const Vec base0 = b.dpi(p, X);
    double proj_drift = 0.0, norm_drift = 0.0;
    const double n0 = m.norm(p, X);
    for (std::size_t k = 0; k < Xs.values.size(); ++k) {
      const Vec& q = fiber.points[2 * k];
      proj_drift = std::max(proj_drift, (b.dpi(q, Xs.values[k]) - base0).norm());
      norm_drift = std::max(norm_drift, std::abs(m.norm(q, Xs.values[k]) - n0));
    }
    out.push_back(make_record(proj_drift, ctx.tol("projectable"), fmt_vec(p), "dpi constancy"));
    out.push_back(make_record(norm_drift, ctx.tol("norm_drift"), fmt_vec(p), "norm constancy"));
    return out;
  });
}

CheckReport suite_warping(const SuiteContext& ctx, const SuiteConfig& cfg) {
  const MetricField base = ctx.bundle->reference_metric();
  const BasicScalar h = [&] {
    const std::string& d = ctx.metric.descriptor();
    if (d.rfind("warped(const(", 0) == 0)
      return constant_scalar(std::stod(d.substr(13)));
    return affine_scalar(ctx.bundle);
  }();
  const MetricField warped = warped_metric(ctx.bundle, base, h);

  return run_sampled(ctx, cfg, [&, h, warped, base](int i) {
    Pcg32 rng = ctx.rng_for(i);
    const Bundle& b = *ctx.bundle;
    const Vec p = sample_point(b.total(), rng);
    auto [X, Y] = sample_horizontal_pair(b, base, p, rng);
    const Vec V = sample_unit_vertical(b, base, p, rng);
    Vec V2 = sample_unit_vertical(b, base, p, rng);
    V2 -= base.inner(p, V, V2) * V;
    while (base.norm(p, V2) < 1e-3) {
      V2 = sample_unit_vertical(b, base, p, rng);
      V2 -= base.inner(p, V, V2) * V;
    }
    V2 /= base.norm(p, V2);

    CurvatureProbe oracle(warped, p, ctx.engine);
    std::vector<SampleRecord> out;
    const double hh = warped_sectional(b, base, h, p, PlaneKind::HorizontalHorizontal, X, Y,
                                       ctx.engine);
    out.push_back(make_record(std::abs(hh - oracle.riemann4(X, Y, Y, X)), ctx.tol("agreement"),
                              fmt_vec(p), "horizontal plane"));
    const double vv =
        warped_sectional(b, base, h, p, PlaneKind::VerticalVertical, V, V2, ctx.engine);
    out.push_back(make_record(std::abs(vv - oracle.riemann4(V, V2, V2, V)), ctx.tol("agreement"),
                              fmt_vec(p), "vertical plane"));
    const double vh =
        warped_sectional(b, base, h, p, PlaneKind::Vertizontal, X, V, ctx.engine);
    out.push_back(make_record(std::abs(vh - oracle.riemann4(X, V, V, X)), ctx.tol("agreement"),
                              fmt_vec(p), "vertizontal plane"));
    return out;
  });
}

CheckReport suite_regularization_decay(const SuiteContext& ctx, const SuiteConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckReport report;
  report.suite = ctx.name;
  report.config_echo = echo_config(ctx, cfg);

  const MetricField start =
      ctx.metric.descriptor() == "reference"
          ? warped_metric(ctx.bundle, ctx.bundle->reference_metric(), affine_scalar(ctx.bundle))
          : ctx.metric;

  // Deterministic sample points shared across all t values.
  std::vector<Vec> points;
  for (int i = 0; i < ctx.samples; ++i) {
    Pcg32 rng = ctx.rng_for(i);
    points.push_back(sample_point(ctx.bundle->total(), rng));
  }

  std::vector<double> s_max_per_t;
  for (double t : ctx.t_list) {
    const MetricField gt = regularized_metric(ctx.bundle, start, t);
    double worst = 0.0;
    for (const Vec& p : points)
      worst = std::max(worst, s_tensor_magnitude(*ctx.bundle, gt, p, ctx.engine));
    s_max_per_t.push_back(worst);
  }

  for (std::size_t k = 0; k < ctx.t_list.size(); ++k) {
    SampleRecord r;
    r.residual = s_max_per_t[k];
    r.tolerance = ctx.tol("s_final");
    std::ostringstream note;
    note << "max |S| at t=" << ctx.t_list[k] << " (start " << start.descriptor() << ")";
    r.note = note.str();
    const bool is_last = (k + 1 == ctx.t_list.size());
    const bool monotone = (k == 0) || (s_max_per_t[k] <= s_max_per_t[k - 1]);
    r.passed = monotone && (!is_last || r.residual <= r.tolerance);
    report.samples.push_back(r);
  }

  // Base curvature family of the reference start stays above the floor.
  const MetricField ref = ctx.bundle->reference_metric();
  for (std::size_t i = 0; i < points.size(); ++i) {
    Pcg32 rng = ctx.rng_for(static_cast<int>(i));
    sample_point(ctx.bundle->total(), rng);  // keep the stream aligned with `points`
    auto [X, Y] = sample_horizontal_pair(*ctx.bundle, ref, points[i], rng);
    for (double t : ctx.t_list) {
      const double kb = base_curvature_family(*ctx.bundle, ref, points[i], X, Y, t, ctx.engine);
      SampleRecord r;
      r.residual = std::max(0.0, 1.0 - kb);
      r.tolerance = ctx.tol("base_floor");
      r.passed = r.residual <= r.tolerance;
      std::ostringstream note;
      note << "base family floor at t=" << t;
      r.note = note.str();
      r.frame = fmt_vec(points[i]);
      report.samples.push_back(r);
    }
  }

  for (std::size_t i = 0; i < report.samples.size(); ++i)
    report.samples[i].id = static_cast<int>(i);
  report.finalize();
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

CheckReport suite_holonomy_bounded(const SuiteContext& ctx, const SuiteConfig& cfg) {
  return run_sampled(ctx, cfg, [&](int i) {
    Pcg32 rng = ctx.rng_for(i);
    const Bundle& b = *ctx.bundle;
    const MetricField& m = ctx.metric;
    const Vec p = sample_point(b.total(), rng);
    const Vec X = sample_unit_horizontal(b, m, p, rng);
    const Vec xi0 = sample_unit_vertical(b, m, p, rng);
    const double T = ctx.param("T");
    const GeodesicPath path = integrate_geodesic(m, p, X, T, steps_for(T, ctx.engine), ctx.engine);
    const FieldAlongCurve xi = holonomy_field(b, m, path, xi0, ctx.engine);
    double ratio = 0.0;
    for (std::size_t k = 0; k < xi.values.size(); ++k)
      ratio = std::max(ratio, m.norm(path.points[2 * k], xi.values[k]));
    return std::vector<SampleRecord>{
        make_record(ratio, ctx.tol("ratio"), fmt_vec(p), "max |xi(t)|/|xi(0)|")};
  });
}

}  // namespace

const std::vector<SuiteInfo>& suite_registry() {
  static const std::vector<SuiteInfo> registry = {
      {"riemann-symmetries",
       "Riemann tensor antisymmetries, pair symmetry and first Bianchi identity"},
      {"cheeger-formula-vs-oracle",
       "kappa_t = kappa_0 + (t^3/4)|[Pu,Pv]|^2 + z_t against finite-difference curvature of g_t"},
      {"fatness", "nondegeneracy of omega_V(X,Y) = g(A_X Y, V) on the horizontal space"},
      {"cdr", "positivity margin K_B |A*_X u*|^2 - <u*,(nabla_X A)_X Y>^2 over a 162-point algebra grid"},
      {"wnn", "tau|X|^2|A*_X V|^2 >= <(nabla_X A*)_X V + A*_X S_X V, A*_X V> and its holonomy reduction"},
      {"tapp-identities",
       "R(X,A*V,A*V,V) = 0, R(X,V,A*V,Y) = <nabla_X A*_Y V, A*_X V>, and R(X,V,A*V,X) = 0 when fat"},
      {"corollary-flat", "R(X,Y,Y,V) = 0 for Y in ker A_X, and for all basic Y when fat"},
      {"k-identity",
       "K(c',nu) = 1/2 d^2/dt^2 |nu|^2 - 3|S nu|^2 + |A* nu|^2 for dual holonomy fields"},
      {"dual-inv", "dual-holonomy invariance A^dag nu'(t) = A* nu(t) across adapted metrics"},
      {"good-triple", "exp(s V(t)) = exp(t X(s)) for the triple {X, V, -A*_X V}"},
      {"basicness", "A*_X gamma' solves the basic-field equation along vertical geodesics"},
      {"warping", "vertical-warping curvature formulas against the finite-difference oracle"},
      {"regularization-decay",
       "|S| decay of t g_t|_V + g|_H and positivity of the induced base curvature family"},
      {"holonomy-bounded", "holonomy fields stay norm-bounded over long horizontal geodesics"},
  };
  return registry;
}

bool suite_exists(const std::string& name) {
  for (const auto& s : suite_registry())
    if (s.name == name) return true;
  return false;
}

MetricField make_metric(const std::shared_ptr<const Bundle>& b, const std::string& descriptor) {
  const MetricField ref = b->reference_metric();
  if (descriptor.empty() || descriptor == "reference") return ref;
  auto parse_arg = [&](const std::string& prefix) -> std::optional<double> {
    if (descriptor.rfind(prefix + "(", 0) != 0 || descriptor.back() != ')') return std::nullopt;
    const std::string arg = descriptor.substr(prefix.size() + 1,
                                              descriptor.size() - prefix.size() - 2);
    std::size_t pos = 0;
    const double v = std::stod(arg, &pos);
    if (pos != arg.size()) throw std::invalid_argument("bad metric parameter '" + arg + "'");
    return v;
  };
  try {
    if (auto t = parse_arg("cheeger")) return cheeger_metric(b, ref, *t);
    if (auto t = parse_arg("regularized")) return regularized_metric(b, ref, *t);
    if (descriptor == "warped(affine)") return warped_metric(b, ref, affine_scalar(b));
    if (descriptor.rfind("warped(const:", 0) == 0 && descriptor.back() == ')') {
      const double c = std::stod(descriptor.substr(13, descriptor.size() - 14));
      return warped_metric(b, ref, constant_scalar(c));
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed metric descriptor '" + descriptor + "'");
  }
  throw std::invalid_argument(
      "unknown metric descriptor '" + descriptor +
      "' (expected reference, cheeger(t), regularized(t), warped(const:c), warped(affine))");
}

CheckReport run_suite(const std::string& name, const SuiteConfig& config) {
  if (!suite_exists(name)) {
    std::ostringstream os;
    os << "unknown suite '" << name << "'; registry:";
    for (const auto& s : suite_registry()) os << ' ' << s.name;
    throw std::invalid_argument(os.str());
  }
  const SuiteContext ctx = make_context(name, config);
  if (name == "riemann-symmetries") return suite_riemann_symmetries(ctx, config);
  if (name == "cheeger-formula-vs-oracle") return suite_cheeger_oracle(ctx, config);
  if (name == "fatness") return suite_fatness(ctx, config);
  if (name == "cdr") return suite_cdr(ctx, config);
  if (name == "wnn") return suite_wnn(ctx, config);
  if (name == "tapp-identities") return suite_tapp(ctx, config);
  if (name == "corollary-flat") return suite_corollary_flat(ctx, config);
  if (name == "k-identity") return suite_k_identity(ctx, config);
  if (name == "dual-inv") return suite_dual_inv(ctx, config);
  if (name == "good-triple") return suite_good_triple(ctx, config);
  if (name == "basicness") return suite_basicness(ctx, config);
  if (name == "warping") return suite_warping(ctx, config);
  if (name == "regularization-decay") return suite_regularization_decay(ctx, config);
  if (name == "holonomy-bounded") return suite_holonomy_bounded(ctx, config);
  throw std::logic_error("suite dispatch out of sync with registry");
}

CheckReport scan_cdr(const SuiteConfig& config) { return run_suite("cdr", config); }

}  // namespace curvlab
