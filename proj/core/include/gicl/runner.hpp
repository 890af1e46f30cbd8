#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gicl/gateway.hpp"
#include "gicl/method_code.hpp"
#include "gicl/prompt.hpp"
#include "gicl/trial.hpp"

namespace gicl {

struct RunPlan {
  Task task = Task::NodeClassification;
  std::vector<MethodCode> codes;
  /// Node ids (NC) or indices into the dataset's pairs (LP). Empty means the
  /// labelled test nodes, or the test pairs, in ascending order.
  std::vector<std::uint64_t> trial_ids;
  std::uint64_t seed = 0;
  RenderOptions render;  // carries the CoT flag and budgets
  TemplatePack templates;
  BackendConfig backend;
  PageRankParams pagerank;
  std::size_t concurrency = 1;
  std::optional<std::size_t> limit;
  std::filesystem::path output_dir;
  bool resume = false;

  /// Throws std::invalid_argument for an empty code list, zero concurrency,
  /// or primed codes on link prediction.
  void validate() const;
};

struct CodeStats {
  double accuracy = 0.0;
  std::size_t n = 0;
  std::size_t correct = 0;
  std::size_t unparsed = 0;
  std::size_t errors = 0;
};

struct RunOutcome {
  std::map<std::string, CodeStats> per_code;
  std::optional<std::string> s1;
  std::optional<std::string> s2;
  std::size_t trials_total = 0;
  std::size_t trials_run = 0;      // executed by this invocation
  std::size_t trials_resumed = 0;  // already present on disk
  std::size_t backend_exhausted = 0;
};

inline constexpr const char* kTrialsFile = "trials.jsonl";
inline constexpr const char* kSummaryFile = "summary.json";

/// Render options with budgets clamped to the task's caps (6 neighbours and
/// 6 demos for node classification, 6 neighbours and 3 demos for links).
RenderOptions effective_render_options(const RunPlan& plan);

/// Subjects of a plan in trial order (one entry per subject).
struct Subject {
  std::string key;  // node id, or "src-dst"
  std::optional<NodeId> node;
  std::optional<NodePair> pair;
  std::string gold;
};
std::vector<Subject> plan_subjects(const TextAttributedGraph& g, const RunPlan& plan);

/// Best and second-best codes; ties go to the lexicographically smaller code.
std::pair<std::optional<std::string>, std::optional<std::string>> best_two(
    const std::map<std::string, CodeStats>& per_code);

/// Runs select -> render -> complete -> extract for every (code, subject),
/// appending one line per trial to trials.jsonl in plan order, then writes
/// summary.json. Per-trial failures are recorded, never thrown. Setup
/// problems (bad plan, existing output without `resume`, missing
/// credentials) throw before any trial runs.
RunOutcome run(const TextAttributedGraph& g, const RunPlan& plan, const std::string& dataset_digest);

}  // namespace gicl
