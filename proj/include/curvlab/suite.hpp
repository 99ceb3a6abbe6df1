#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/fd.hpp"
#include "curvlab/report.hpp"

namespace curvlab {

/// Runtime configuration of one suite run. Unset optionals fall back to
/// per-suite defaults (sample counts, t lists, tolerances, step counts).
struct SuiteConfig {
  std::string bundle = "hopf";
  std::string metric = "reference";
  std::optional<int> samples;
  std::uint64_t seed = 1;
  int workers = 1;
  std::vector<double> t_list;                 // empty means suite default
  std::map<std::string, double> tolerances;   // overrides, all > 0
  std::map<std::string, double> params;       // suite parameters (T, tau, grid, ...)
  FdConfig engine;
  bool steps_overridden = false;  // user pinned rk4_steps_per_unit
};

struct SuiteInfo {
  std::string name;
  std::string checks;  // the identity or property the suite verifies
};

const std::vector<SuiteInfo>& suite_registry();
bool suite_exists(const std::string& name);

/// Runs a registered suite; throws std::invalid_argument for unknown names
/// or bad configuration. Deterministic for fixed (suite, config, seed).
CheckReport run_suite(const std::string& name, const SuiteConfig& config);

/// Minimum positivity margin scan (the "cdr" suite).
CheckReport scan_cdr(const SuiteConfig& config);

/// Builds the metric named by a descriptor over the bundle's reference
/// metric: reference | cheeger(t) | regularized(t) | warped(const:c) |
/// warped(affine).
class Bundle;
MetricField make_metric(const std::shared_ptr<const Bundle>& b, const std::string& descriptor);

}  // namespace curvlab
