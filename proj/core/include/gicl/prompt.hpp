#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gicl/method_code.hpp"
#include "gicl/selection.hpp"
#include "gicl/templates.hpp"

namespace gicl {

enum class Task : std::uint8_t { NodeClassification, LinkPrediction };

std::string_view to_string(Task t) noexcept;  // "nc" / "lp"
std::optional<Task> parse_task(std::string_view s);

inline constexpr std::string_view kDefaultCotSentence = "Please reason step by step.";
inline constexpr std::string_view kEllipsis = "…";

struct RenderOptions {
  bool cot = false;
  std::string cot_sentence{kDefaultCotSentence};
  SelectionBudget budget = SelectionBudget::node_classification();
  /// Caps in Unicode code points, ellipsis included. 0 disables a cap.
  std::size_t max_anchor_chars = 2048;
  std::size_t max_item_chars = 512;
  /// Render gold labels of train-split neighbours for unprimed structure
  /// codes. Off by default; primed codes always carry labels.
  bool label_unprimed_neighbors = false;
  /// Node classification normally requires a test-split anchor.
  bool allow_any_split = false;
};

/// Everything a downstream consumer needs to know about how a prompt was
/// built. The mock backend reads demo labels from here.
struct PromptAudit {
  Task task = Task::NodeClassification;
  std::string code;
  std::optional<NodeId> anchor;
  std::optional<NodePair> pair;
  TemplateVariant variant = TemplateVariant::NcZero;
  bool cot = false;

  int hop = 0;
  bool neighbors_labeled = false;
  std::size_t neighbor_pool = 0;
  std::vector<NeighborItem> neighbors;

  std::optional<DemoScope> demo_scope;
  std::vector<NodeDemo> demos;
  std::vector<PairDemo> pair_demos;
  std::vector<std::string> skipped_classes;

  bool empty_neighbors = false;  // structure requested, nothing to show
  bool empty_demos = false;      // demonstrations requested, nothing to show
  std::size_t truncated_fields = 0;

  std::string digest;  // SHA-256 of system_text followed by user_text
};

struct PromptBundle {
  std::string system_text;
  std::string user_text;
  MethodCode code;
  PromptAudit audit;
};

class RenderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Truncates `text` to at most `max_chars` code points, replacing the tail
/// with a single ellipsis. Returns whether it cut anything.
bool truncate_utf8(std::string& text, std::size_t max_chars);

PromptBundle render_nc(const Selector& selector, const MethodCode& code, NodeId anchor, std::uint64_t seed,
                       const RenderOptions& options, const TemplatePack& pack);

PromptBundle render_lp(const Selector& selector, const MethodCode& code, NodePair pair, std::uint64_t seed,
                       const RenderOptions& options, const TemplatePack& pack);

/// `{ "system", "user", "audit": {...} }`, compact or indented.
std::string bundle_to_json(const PromptBundle& bundle, const TextAttributedGraph& g, int indent = -1);

}  // namespace gicl
