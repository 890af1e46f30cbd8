#include "gicl/selection.hpp"

#include <algorithm>
#include <stdexcept>

#include "gicl/rng.hpp"

namespace gicl {

namespace {

// Highest score first, then lower key.
template <typename T, typename Key>
void rank_prefix(std::vector<T>& items, std::size_t count, const std::vector<double>& score, Key key) {
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  count = std::min(count, items.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (score[a] != score[b]) return score[a] > score[b];
                      return key(items[a]) < key(items[b]);
                    });
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(items[order[i]]);
  items = std::move(out);
}

bool contains_sorted(const std::vector<NodeId>& sorted, NodeId id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

std::vector<NodeId> sorted_copy(std::span<const NodeId> ids) {
  std::vector<NodeId> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

char strategy_letter(Strategy s) noexcept {
  switch (s) {
    case Strategy::Random: return 'R';
    case Strategy::PageRank: return 'P';
    case Strategy::Similarity: return 'S';
  }
  return '?';
}

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::Random: return "random";
    case Strategy::PageRank: return "pagerank";
    case Strategy::Similarity: return "similarity";
  }
  return "unknown";
}

std::string_view to_string(DemoScope s) noexcept {
  return s == DemoScope::Global ? "global" : "class_aware";
}

std::vector<NodeId> NeighborSelection::ids() const {
  std::vector<NodeId> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(it.id);
  return out;
}

Selector::Selector(const TextAttributedGraph& g, const PageRankParams& params)
    : g_(&g), scores_(pagerank(g, params).scores) {}

Selector::Selector(const TextAttributedGraph& g, std::vector<double> pagerank_scores)
    : g_(&g), scores_(std::move(pagerank_scores)) {
  if (scores_.size() != g.node_count()) {
    throw std::invalid_argument("PageRank score vector does not match node count");
  }
}

std::vector<NodeId> Selector::pick_nodes(std::vector<NodeId> pool, std::size_t count, Strategy strategy,
                                         NodeId anchor, SplitMix64& rng) const {
  switch (strategy) {
    case Strategy::Random: {
      std::sort(pool.begin(), pool.end());
      partial_shuffle(std::span<NodeId>(pool), count, rng);
      pool.resize(std::min(count, pool.size()));
      return pool;
    }
    case Strategy::PageRank: {
      std::vector<double> score(pool.size());
      for (std::size_t i = 0; i < pool.size(); ++i) score[i] = scores_[pool[i]];
      rank_prefix(pool, count, score, [](NodeId id) { return id; });
      return pool;
    }
    case Strategy::Similarity: {
      const auto anchor_vec = g_->embedding(anchor);
      std::vector<double> score(pool.size());
      for (std::size_t i = 0; i < pool.size(); ++i) {
        score[i] = cosine(anchor_vec, g_->embedding(pool[i])).value;
      }
      rank_prefix(pool, count, score, [](NodeId id) { return id; });
      return pool;
    }
  }
  throw std::logic_error("unknown selection strategy");
}

std::vector<PairExample> Selector::pick_pairs(std::vector<PairExample> pool, std::size_t count,
                                              Strategy strategy, NodePair anchor_pair,
                                              SplitMix64& rng) const {
  const auto key = [](const PairExample& p) { return p.pair; };
  switch (strategy) {
    case Strategy::Random: {
      std::sort(pool.begin(), pool.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
      partial_shuffle(std::span<PairExample>(pool), count, rng);
      pool.resize(std::min(count, pool.size()));
      return pool;
    }
    case Strategy::PageRank: {
      std::vector<double> score(pool.size());
      for (std::size_t i = 0; i < pool.size(); ++i) score[i] = edge_pagerank(scores_, pool[i].pair);
      rank_prefix(pool, count, score, key);
      return pool;
    }
    case Strategy::Similarity: {
      const auto anchor_vec = edge_embedding(*g_, anchor_pair);
      std::vector<double> score(pool.size());
      for (std::size_t i = 0; i < pool.size(); ++i) {
        const auto v = edge_embedding(*g_, pool[i].pair);
        score[i] = cosine(std::span<const double>(anchor_vec), std::span<const double>(v)).value;
      }
      rank_prefix(pool, count, score, key);
      return pool;
    }
  }
  throw std::logic_error("unknown selection strategy");
}

NeighborSelection Selector::select_neighbors(NodeId anchor, int hop, Strategy strategy,
                                             std::size_t max_neighbors, std::uint64_t seed,
                                             bool labeled) const {
  auto pool = khop_frontier(*g_, anchor, hop);
  if (labeled) {
    std::erase_if(pool, [&](NodeId id) { return g_->split(id) != Split::Train; });
  }
  NeighborSelection sel;
  sel.hop = hop;
  sel.labeled = labeled;
  sel.pool_size = pool.size();
  SplitMix64 rng(derive_stream_seed(seed, anchor, DrawPurpose::Neighbors));
  for (const NodeId id : pick_nodes(std::move(pool), max_neighbors, strategy, anchor, rng)) {
    NeighborItem item{id, std::nullopt};
    if (labeled) item.label = g_->label(id);
    sel.items.push_back(item);
  }
  return sel;
}

DemonstrationSet Selector::select_demos_global(Strategy strategy, std::size_t max_demos, std::uint64_t seed,
                                               std::span<const NodeId> exclusions, NodeId anchor) const {
  g_->check_node(anchor);
  const auto excluded = sorted_copy(exclusions);
  std::vector<NodeId> pool;
  for (NodeId id = 0; id < g_->node_count(); ++id) {
    if (g_->split(id) != Split::Train || id == anchor || contains_sorted(excluded, id)) continue;
    pool.push_back(id);
  }
  DemonstrationSet demos;
  demos.scope = DemoScope::Global;
  SplitMix64 rng(derive_stream_seed(seed, anchor, DrawPurpose::Demos));
  for (const NodeId id : pick_nodes(std::move(pool), max_demos, strategy, anchor, rng)) {
    demos.nodes.push_back({id, *g_->label(id)});
  }
  return demos;
}

DemonstrationSet Selector::select_demos_class_aware(Strategy strategy, std::uint64_t seed,
                                                    std::span<const NodeId> exclusions, NodeId anchor) const {
  g_->check_node(anchor);
  const auto excluded = sorted_copy(exclusions);
  const auto& vocab = g_->label_vocabulary();
  std::vector<std::vector<NodeId>> pools(vocab.size());
  for (NodeId id = 0; id < g_->node_count(); ++id) {
    if (g_->split(id) != Split::Train || id == anchor || contains_sorted(excluded, id)) continue;
    pools[*g_->label(id)].push_back(id);
  }
  DemonstrationSet demos;
  demos.scope = DemoScope::ClassAware;
  SplitMix64 rng(derive_stream_seed(seed, anchor, DrawPurpose::Demos));
  for (LabelId c = 0; c < vocab.size(); ++c) {
    if (pools[c].empty()) {
      demos.skipped_classes.push_back(vocab[c]);
      continue;
    }
    const auto picked = pick_nodes(std::move(pools[c]), 1, strategy, anchor, rng);
    demos.nodes.push_back({picked.front(), c});
  }
  return demos;
}

DemonstrationSet Selector::select_edge_demos(Strategy strategy, std::size_t max_demos, std::uint64_t seed,
                                             bool class_aware, NodePair anchor_pair) const {
  g_->check_node(anchor_pair.src);
  g_->check_node(anchor_pair.dst);
  const NodePair reversed{anchor_pair.dst, anchor_pair.src};
  std::vector<PairExample> positives;
  std::vector<PairExample> negatives;
  for (const auto& p : g_->pairs()) {
    if (p.split != Split::Train || p.pair == anchor_pair || p.pair == reversed) continue;
    (p.connected ? positives : negatives).push_back(p);
  }

  DemonstrationSet demos;
  demos.scope = class_aware ? DemoScope::ClassAware : DemoScope::Global;
  SplitMix64 rng(derive_stream_seed(seed, pair_anchor_key(anchor_pair.src, anchor_pair.dst), DrawPurpose::Demos));
  if (class_aware) {
    for (auto* pool : {&positives, &negatives}) {
      const bool connected = pool == &positives;
      if (pool->empty()) {
        demos.skipped_classes.emplace_back(connected ? "connected" : "disconnected");
        continue;
      }
      const auto picked = pick_pairs(std::move(*pool), 1, strategy, anchor_pair, rng);
      demos.pairs.push_back({picked.front().pair, connected});
    }
    return demos;
  }

  std::vector<PairExample> pool = std::move(positives);
  pool.insert(pool.end(), negatives.begin(), negatives.end());
  for (const auto& p : pick_pairs(std::move(pool), max_demos, strategy, anchor_pair, rng)) {
    demos.pairs.push_back({p.pair, p.connected});
  }
  return demos;
}

}  // namespace gicl
