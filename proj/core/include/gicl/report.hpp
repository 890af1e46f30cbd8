#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gicl/runner.hpp"

namespace gicl {

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Baseline {
  std::string name;
  double accuracy = 0.0;
};

/// Parses "NAME=ACC". Throws std::invalid_argument.
Baseline parse_baseline(std::string_view spec);

struct ReportRow {
  std::string code;
  bool cot = false;
  CodeStats stats;
  /// On CoT rows whose code also ran without CoT: with minus without, in
  /// percentage points.
  std::optional<double> cot_delta_pp;

  /// Row key used for ranking: the code, with "+cot" appended for CoT runs.
  std::string key() const;
};

struct Improvement {
  std::string baseline;
  double baseline_accuracy = 0.0;
  double relative_percent = 0.0;
};

struct EvalReport {
  std::string task;
  std::vector<ReportRow> rows;  // sorted by (code, cot)
  std::optional<std::string> s1;
  std::optional<std::string> s2;
  std::vector<Improvement> improvements;  // S1 against each baseline
};

/// Builds a report from already-aggregated rows. Rows must have unique keys.
EvalReport build_report(std::string task, std::vector<ReportRow> rows, const std::vector<Baseline>& baselines);

/// Loads each run directory, recomputes per-code stats from trials.jsonl
/// and checks them against summary.json. All runs must share a task.
/// Throws ReportError on missing, corrupt or inconsistent artifacts.
EvalReport build_report(const std::vector<std::filesystem::path>& run_dirs, const std::vector<Baseline>& baselines);

std::string render_table(const EvalReport& r);
std::string render_json(const EvalReport& r);
std::string render_csv(const EvalReport& r);

}  // namespace gicl
