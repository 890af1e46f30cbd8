#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gicl/analytics.hpp"
#include "gicl/graph.hpp"
#include "gicl/rng.hpp"

namespace gicl {

enum class Strategy : std::uint8_t { Random, PageRank, Similarity };

enum class DemoScope : std::uint8_t { Global, ClassAware };

char strategy_letter(Strategy s) noexcept;
std::string_view to_string(Strategy s) noexcept;
std::string_view to_string(DemoScope s) noexcept;

/// Caps on how much context a prompt may carry.
struct SelectionBudget {
  std::size_t max_neighbors = 6;
  std::size_t max_demos = 6;

  static constexpr SelectionBudget node_classification() noexcept { return {6, 6}; }
  static constexpr SelectionBudget link_prediction() noexcept { return {6, 3}; }
};

struct NeighborItem {
  NodeId id = 0;
  std::optional<LabelId> label;  // set only for labelled (primed) selections

  friend bool operator==(const NeighborItem&, const NeighborItem&) = default;
};

struct NeighborSelection {
  int hop = 1;
  bool labeled = false;
  std::vector<NeighborItem> items;  // in selection order
  std::size_t pool_size = 0;        // candidates before the budget cut

  std::vector<NodeId> ids() const;
};

struct NodeDemo {
  NodeId id = 0;
  LabelId label = 0;

  friend bool operator==(const NodeDemo&, const NodeDemo&) = default;
};

struct PairDemo {
  NodePair pair;
  bool connected = false;

  friend bool operator==(const PairDemo&, const PairDemo&) = default;
};

struct DemonstrationSet {
  DemoScope scope = DemoScope::Global;
  std::vector<NodeDemo> nodes;  // node-classification demos
  std::vector<PairDemo> pairs;  // link-prediction demos
  /// Class-aware slots left empty because their pool was exhausted: label
  /// names for node classification, "connected"/"disconnected" for pairs.
  std::vector<std::string> skipped_classes;

  bool empty() const noexcept { return nodes.empty() && pairs.empty(); }
  std::size_t size() const noexcept { return nodes.size() + pairs.size(); }
};

/// Chooses structure-aware neighbours and demonstrations for one graph.
/// Every choice is a pure function of its arguments and the graph; ties are
/// always broken towards the lower node id (or lower (src, dst) pair).
class Selector {
 public:
  /// Computes PageRank once with `params`.
  explicit Selector(const TextAttributedGraph& g, const PageRankParams& params = {});
  Selector(const TextAttributedGraph& g, std::vector<double> pagerank_scores);

  const TextAttributedGraph& graph() const noexcept { return *g_; }
  std::span<const double> pagerank_scores() const noexcept { return scores_; }

  /// Up to `max_neighbors` nodes from the exact-distance `hop` frontier.
  /// When `labeled`, only train-split members are eligible and each item
  /// carries its gold label.
  NeighborSelection select_neighbors(NodeId anchor, int hop, Strategy strategy, std::size_t max_neighbors,
                                     std::uint64_t seed, bool labeled) const;

  /// Up to `max_demos` train nodes, excluding `anchor` and `exclusions`.
  DemonstrationSet select_demos_global(Strategy strategy, std::size_t max_demos, std::uint64_t seed,
                                       std::span<const NodeId> exclusions, NodeId anchor) const;

  /// One train node per class, in vocabulary order. Not capped by the budget.
  DemonstrationSet select_demos_class_aware(Strategy strategy, std::uint64_t seed,
                                            std::span<const NodeId> exclusions, NodeId anchor) const;

  /// Train pairs from pairs.jsonl, never the anchor pair itself (either
  /// orientation). Class-aware yields one connected then one disconnected
  /// pair; otherwise up to `max_demos`. Throws DatasetError without pairs.
  DemonstrationSet select_edge_demos(Strategy strategy, std::size_t max_demos, std::uint64_t seed,
                                     bool class_aware, NodePair anchor_pair) const;

 private:
  std::vector<NodeId> pick_nodes(std::vector<NodeId> pool, std::size_t count, Strategy strategy,
                                 NodeId anchor, SplitMix64& rng) const;
  std::vector<PairExample> pick_pairs(std::vector<PairExample> pool, std::size_t count, Strategy strategy,
                                      NodePair anchor_pair, SplitMix64& rng) const;

  const TextAttributedGraph* g_;
  std::vector<double> scores_;
};

}  // namespace gicl
