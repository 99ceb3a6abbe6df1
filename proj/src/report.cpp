#include "curvlab/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace curvlab {

void CheckReport::finalize(const std::string& fail_verdict) {
  max_residual = 0.0;
  mean_residual = 0.0;
  skipped_count = 0;
  passed = true;
  int counted = 0;
  for (const auto& s : samples) {
    if (s.skipped) {
      ++skipped_count;
      continue;
    }
    ++counted;
    max_residual = std::max(max_residual, s.residual);
    mean_residual += s.residual;
    if (!s.passed) passed = false;
  }
  if (counted > 0) mean_residual /= counted;
  verdict = passed ? "pass" : fail_verdict;
}

nlohmann::ordered_json CheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["suite"] = suite;
  j["verdict"] = verdict;
  j["passed"] = passed;
  j["config"] = config_echo;
  const int counted = static_cast<int>(samples.size()) - skipped_count;
  if (counted > 0) {
    j["aggregates"] = {{"max_residual", max_residual},
                       {"mean_residual", mean_residual},
                       {"samples", samples.size()},
                       {"skipped", skipped_count}};
  } else {
    j["aggregates"] = {{"max_residual", nullptr},
                       {"mean_residual", nullptr},
                       {"samples", samples.size()},
                       {"skipped", skipped_count}};
  }
  auto rows = nlohmann::ordered_json::array();
  for (const auto& s : samples) {
    nlohmann::ordered_json row;
    row["id"] = s.id;
    row["residual"] = s.residual;
    row["tolerance"] = s.tolerance;
    row["verdict"] = s.skipped ? "skip" : (s.passed ? "pass" : "fail");
    if (!s.note.empty()) row["note"] = s.note;
    if (!s.frame.empty()) row["frame"] = s.frame;
    rows.push_back(std::move(row));
  }
  j["samples"] = std::move(rows);
  j["wall_time_s"] = wall_time_s;
  return j;
}

std::string CheckReport::to_json_string() const { return to_json().dump(2) + "\n"; }

std::string CheckReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "suite,sample_id,residual,tolerance,verdict\n";
  for (const auto& s : samples) {
    os << suite << ',' << s.id << ',' << s.residual << ',' << s.tolerance << ','
       << (s.skipped ? "skip" : (s.passed ? "pass" : "fail")) << '\n';
  }
  return os.str();
}

void write_report(const CheckReport& report, const std::string& format, const std::string& path) {
  std::string payload;
  if (format == "json")
    payload = report.to_json_string();
  else if (format == "csv")
    payload = report.to_csv();
  else
    throw std::invalid_argument("unknown report format '" + format + "' (expected json or csv)");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << payload;
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

}  // namespace curvlab
