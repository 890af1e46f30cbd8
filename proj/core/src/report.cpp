#include "gicl/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gicl/metrics.hpp"
#include "json.hpp"

namespace gicl {

namespace fs = std::filesystem;

namespace {

using ojson = nlohmann::ordered_json;

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ReportError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

struct RunArtifacts {
  std::string task;
  bool cot = false;
  std::vector<std::string> codes;
  std::map<std::string, CodeStats> per_code;
};

RunArtifacts load_run(const fs::path& dir) {
  const auto summary_path = dir / kSummaryFile;
  const auto trials_path = dir / kTrialsFile;
  if (!fs::exists(summary_path)) throw ReportError(summary_path.string() + " is missing");
  if (!fs::exists(trials_path)) throw ReportError(trials_path.string() + " is missing");

  RunArtifacts run;
  nlohmann::json summary;
  try {
    summary = nlohmann::json::parse(read_file(summary_path));
    const auto& plan = summary.at("plan");
    run.task = plan.at("task").get<std::string>();
    run.cot = plan.at("cot").get<bool>();
    for (const auto& c : plan.at("codes")) run.codes.push_back(c.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(summary_path.string() + " is corrupt: " + e.what());
  }

  std::set<std::string> seen;
  std::map<std::string, CodeStats> recomputed;
  for (const auto& c : run.codes) recomputed[c];
  std::istringstream lines(read_file(trials_path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty()) continue;
    TrialResult t;
    try {
      t = trial_from_json_line(line);
    } catch (const std::invalid_argument& e) {
      throw ReportError(trials_path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!seen.insert(t.trial_id).second) {
      throw ReportError(trials_path.string() + ":" + std::to_string(lineno) + ": duplicate trial " + t.trial_id);
    }
    const auto it = recomputed.find(t.code);
    if (it == recomputed.end()) {
      throw ReportError(trials_path.string() + ":" + std::to_string(lineno) + ": code " + t.code +
                        " is not in the run plan");
    }
    auto& s = it->second;
    ++s.n;
    s.correct += t.correct ? 1 : 0;
    s.unparsed += t.unparsed ? 1 : 0;
    s.errors += t.error ? 1 : 0;
  }
  for (auto& [code, s] : recomputed) {
    s.accuracy = s.n ? 100.0 * static_cast<double>(s.correct) / static_cast<double>(s.n) : 0.0;
  }

  try {
    const auto& per_code = summary.at("per_code");
    for (const auto& [code, s] : recomputed) {
      const auto& rec = per_code.at(code);
      const bool same = rec.at("n").get<std::size_t>() == s.n && rec.at("unparsed").get<std::size_t>() == s.unparsed &&
                        rec.at("errors").get<std::size_t>() == s.errors &&
                        std::abs(rec.at("accuracy").get<double>() - s.accuracy) < 1e-9;
      if (!same) throw ReportError("summary for " + code + " in " + dir.string() + " disagrees with its trials");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(summary_path.string() + " is corrupt: " + e.what());
  }
  run.per_code = std::move(recomputed);
  return run;
}

}  // namespace

Baseline parse_baseline(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == spec.size()) {
    throw std::invalid_argument("baseline must look like NAME=ACC: " + std::string(spec));
  }
  Baseline b;
  b.name = std::string(spec.substr(0, eq));
  const auto num = spec.substr(eq + 1);
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), b.accuracy);
  if (ec != std::errc() || ptr != num.data() + num.size()) {
    throw std::invalid_argument("baseline accuracy is not a number: " + std::string(num));
  }
  if (!(b.accuracy > 0.0) || b.accuracy > 100.0) {
    throw std::invalid_argument("baseline accuracy must be in (0, 100]: " + std::string(num));
  }
  return b;
}

std::string ReportRow::key() const { return cot ? code + "+cot" : code; }

EvalReport build_report(std::string task, std::vector<ReportRow> rows, const std::vector<Baseline>& baselines) {
  EvalReport r;
  r.task = std::move(task);
  std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.code, a.cot) < std::tie(b.code, b.cot);
  });
  std::map<std::string, CodeStats> by_key;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!by_key.emplace(rows[i].key(), rows[i].stats).second) {
      throw ReportError("code " + rows[i].key() + " appears in more than one run");
    }
  }
  for (auto& row : rows) {
    row.cot_delta_pp.reset();
    if (!row.cot) continue;
    const auto plain = by_key.find(row.code);
    if (plain != by_key.end() && plain->second.n > 0 && row.stats.n > 0) {
      row.cot_delta_pp = percentage_point_delta(row.stats.accuracy, plain->second.accuracy);
    }
  }
  std::tie(r.s1, r.s2) = best_two(by_key);
  if (r.s1) {
    const double best = by_key.at(*r.s1).accuracy;
    for (const auto& b : baselines) r.improvements.push_back({b.name, b.accuracy, relative_improvement(best, b.accuracy)});
  }
  r.rows = std::move(rows);
  return r;
}

EvalReport build_report(const std::vector<fs::path>& run_dirs, const std::vector<Baseline>& baselines) {
  if (run_dirs.empty()) throw ReportError("no run directories given");
  std::string task;
  std::vector<ReportRow> rows;
  for (const auto& dir : run_dirs) {
    auto run = load_run(dir);
    if (task.empty()) task = run.task;
    if (run.task != task) throw ReportError("runs mix tasks " + task + " and " + run.task);
    for (auto& [code, stats] : run.per_code) rows.push_back({code, run.cot, stats, std::nullopt});
  }
  return build_report(std::move(task), std::move(rows), baselines);
}

std::string render_table(const EvalReport& r) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %-4s %9s %6s %9s %7s %12s\n", "code", "cot", "accuracy", "n", "unparsed",
                "errors", "cot_delta_pp");
  out << line;
  for (const auto& row : r.rows) {
    const auto delta = row.cot_delta_pp ? format_signed(*row.cot_delta_pp) : std::string("-");
    std::snprintf(line, sizeof line, "%-10s %-4s %9s %6zu %9zu %7zu %12s\n", row.code.c_str(), row.cot ? "yes" : "no",
                  fixed2(row.stats.accuracy).c_str(), row.stats.n, row.stats.unparsed, row.stats.errors, delta.c_str());
    out << line;
  }
  out << "\nS1: " << r.s1.value_or("-") << "\nS2: " << r.s2.value_or("-") << '\n';
  if (!r.improvements.empty()) {
    out << "\nrelative improvement of S1 over baselines\n";
    for (const auto& imp : r.improvements) {
      std::snprintf(line, sizeof line, "  %-20s %7s  %s%%\n", imp.baseline.c_str(), fixed2(imp.baseline_accuracy).c_str(),
                    format_signed(imp.relative_percent).c_str());
      out << line;
    }
  }
  return out.str();
}

std::string render_json(const EvalReport& r) {
  ojson rows = ojson::array();
  for (const auto& row : r.rows) {
    ojson j;
    j["code"] = row.code;
    j["cot"] = row.cot;
    j["accuracy"] = row.stats.accuracy;
    j["n"] = row.stats.n;
    j["unparsed"] = row.stats.unparsed;
    j["errors"] = row.stats.errors;
    j["cot_delta_pp"] = row.cot_delta_pp ? ojson(*row.cot_delta_pp) : ojson(nullptr);
    rows.push_back(std::move(j));
  }
  ojson imps = ojson::array();
  for (const auto& imp : r.improvements) {
    imps.push_back({{"baseline", imp.baseline},
                    {"baseline_accuracy", imp.baseline_accuracy},
                    {"relative_percent", std::round(imp.relative_percent * 100.0) / 100.0},
                    {"formatted", format_signed(imp.relative_percent) + "%"}});
  }
  ojson doc;
  doc["task"] = r.task;
  doc["rows"] = std::move(rows);
  doc["s1"] = r.s1 ? ojson(*r.s1) : ojson(nullptr);
  doc["s2"] = r.s2 ? ojson(*r.s2) : ojson(nullptr);
  doc["relative_improvements"] = std::move(imps);
  return doc.dump(2) + "\n";
}

std::string render_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "code,cot,accuracy,n,unparsed,errors,cot_delta_pp\n";
  for (const auto& row : r.rows) {
    out << row.code << ',' << (row.cot ? "yes" : "no") << ',' << fixed2(row.stats.accuracy) << ',' << row.stats.n
        << ',' << row.stats.unparsed << ',' << row.stats.errors << ','
        << (row.cot_delta_pp ? format_signed(*row.cot_delta_pp) : std::string()) << '\n';
  }
  return out.str();
}

}  // namespace gicl
