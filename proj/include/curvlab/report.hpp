#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace curvlab {

struct SampleRecord {
  int id = 0;
  std::string frame;  // coordinates of the sampled frame
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  bool skipped = false;
  std::string note;
};

struct CheckReport {
  std::string suite;
  nlohmann::ordered_json config_echo;
  std::vector<SampleRecord> samples;
  bool passed = false;
  std::string verdict;  // "pass", "fail", or a suite-specific label
  double max_residual = 0.0;
  double mean_residual = 0.0;
  int skipped_count = 0;
  double wall_time_s = 0.0;

  /// Aggregates over non-skipped samples; verdict defaults to pass/fail.
  void finalize(const std::string& fail_verdict = "fail");

  nlohmann::ordered_json to_json() const;
  std::string to_json_string() const;
  std::string to_csv() const;
};

void write_report(const CheckReport& report, const std::string& format, const std::string& path);

}  // namespace curvlab
