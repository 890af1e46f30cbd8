#include <random>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gicl/analytics.hpp"
#include "gicl/rng.hpp"
#include "gicl/selection.hpp"
#include "oracles.hpp"

namespace gicl {
namespace {

std::vector<double> float_row(const GraphParts& p, NodeId id) {
  return {p.embeddings.begin() + id * p.dim, p.embeddings.begin() + (id + 1) * p.dim};
}

// Hub 0 with 20 leaves, each leaf also joined to the next one.
GraphParts hub_parts() {
  auto parts = testing::random_parts(21, 0.0, 5, 6);
  for (NodeId i = 1; i <= 20; ++i) parts.edges.push_back({0, i});
  for (NodeId i = 1; i < 20; i += 2) parts.edges.push_back({i, i + 1});
  return parts;
}

// Independent statement of the documented draw: splitmix64 stream seeded by
// seed ^ anchor*golden ^ tag, then a partial Fisher-Yates over the ascending pool.
std::vector<NodeId> random_oracle(std::vector<NodeId> pool, std::size_t k, std::uint64_t seed, std::uint64_t anchor,
                                  std::uint64_t tag) {
  auto mix = [](std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  std::uint64_t init = seed ^ (anchor * 0x9E3779B97F4A7C15ULL) ^ tag;
  std::uint64_t state = mix(init);
  std::sort(pool.begin(), pool.end());
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + mix(state) % (pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

TEST(Rng, PartialShuffleIsPermutationPrefix) {
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
  SplitMix64 rng(42);
  partial_shuffle(std::span<int>(v), 3, rng);
  std::set<int> all(v.begin(), v.end());
  EXPECT_EQ(all.size(), 8u);
}

TEST(Rng, SplitMixKnownValue) {
  // First output of the reference generator seeded with 0.
  std::uint64_t s = 0;
  EXPECT_EQ(splitmix64_next(s), 0xE220A8397B1DCDAFULL);
}

TEST(SelectNeighbors, SmallPoolReturnsAllBySimilarity) {
  auto parts = testing::random_parts(4, 0.0, 3, 3);
  parts.edges = {{0, 1}, {0, 2}, {0, 3}};
  const TextAttributedGraph g(parts);
  const Selector sel(g);
  const auto got = sel.select_neighbors(0, 1, Strategy::Similarity, 6, 0, false);
  ASSERT_EQ(got.items.size(), 3u);
  EXPECT_EQ(got.pool_size, 3u);
  const auto a = float_row(parts, 0);
  double prev = 2.0;
  for (const auto& it : got.items) {
    const double c = oracle::cosine(a, float_row(parts, it.id));
    EXPECT_LE(c, prev);
    prev = c;
  }
}

TEST(SelectNeighbors, TriangleSecondHopEmpty) {
  auto parts = testing::random_parts(3, 0.0, 3, 3);
  parts.edges = {{0, 1}, {1, 2}, {0, 2}};
  const TextAttributedGraph g(parts);
  const Selector sel(g);
  EXPECT_TRUE(sel.select_neighbors(0, 2, Strategy::Random, 6, 1, false).items.empty());
}

TEST(SelectNeighbors, PageRankMatchesFullSortOracle) {
  const auto parts = hub_parts();
  const TextAttributedGraph g(parts);
  // Injected scores with deliberate ties exercise the id tie-break.
  std::vector<double> scores(21);
  for (NodeId i = 0; i < 21; ++i) scores[i] = static_cast<double>((i * 7) % 5);
  const Selector sel(g, scores);
  const auto got = sel.select_neighbors(0, 1, Strategy::PageRank, 6, 0, false).ids();

  std::vector<NodeId> pool;
  std::vector<double> s;
  for (NodeId i = 1; i <= 20; ++i) {
    pool.push_back(i);
    s.push_back(scores[i]);
  }
  std::vector<NodeId> want;
  for (const auto i : oracle::top_k(s, pool, 6)) want.push_back(pool[i]);
  EXPECT_EQ(got, want);
}

TEST(SelectNeighbors, RandomMatchesOracleAndDependsOnSeedAndAnchor) {
  const auto parts = hub_parts();
  const TextAttributedGraph g(parts);
  const Selector sel(g);
  std::vector<NodeId> pool;
  for (NodeId i = 1; i <= 20; ++i) pool.push_back(i);

  const auto a = sel.select_neighbors(0, 1, Strategy::Random, 6, 99, false).ids();
  EXPECT_EQ(a, random_oracle(pool, 6, 99, 0, 0x6E65696768626F72ULL));
  EXPECT_EQ(a, sel.select_neighbors(0, 1, Strategy::Random, 6, 99, false).ids());
  EXPECT_NE(a, sel.select_neighbors(0, 1, Strategy::Random, 6, 100, false).ids());

  // Node 1's two-hop frontier is the other 18 leaves; compare anchors 1 and 3.
  const auto b1 = sel.select_neighbors(1, 2, Strategy::Random, 6, 99, false).ids();
  const auto b3 = sel.select_neighbors(3, 2, Strategy::Random, 6, 99, false).ids();
  EXPECT_NE(b1, b3);
}

TEST(SelectNeighbors, LabeledRestrictsToTrain) {
  const TextAttributedGraph g(testing::tiny_parts());
  const Selector sel(g);
  const auto got = sel.select_neighbors(20, 2, Strategy::Similarity, 6, 0, true);
  for (const auto& it : got.items) {
    EXPECT_EQ(g.split(it.id), Split::Train);
    EXPECT_EQ(it.label, g.label(it.id));
  }
}

TEST(SelectDemos, SmallTrainSplitReturnsAll) {
  auto parts = testing::random_parts(5, 0.3, 8);
  for (auto& s : parts.splits) s = Split::Test;
  parts.splits[1] = Split::Train;
  parts.splits[3] = Split::Train;
  const TextAttributedGraph g(parts);
  const Selector sel(g);
  const auto d = sel.select_demos_global(Strategy::Random, 6, 0, {}, 0);
  EXPECT_EQ(d.nodes.size(), 2u);
}

TEST(SelectDemos, AnchorNeverInOwnDemos) {
  const TextAttributedGraph g(testing::tiny_parts());
  const Selector sel(g);
  for (NodeId anchor = 0; anchor < 12; ++anchor) {
    for (const auto s : {Strategy::Random, Strategy::PageRank, Strategy::Similarity}) {
      for (const auto& d : sel.select_demos_global(s, 6, 3, {}, anchor).nodes) EXPECT_NE(d.id, anchor);
      for (const auto& d : sel.select_demos_class_aware(s, 3, {}, anchor).nodes) EXPECT_NE(d.id, anchor);
    }
  }
}

TEST(SelectDemos, SimilarityGlobalMatchesExhaustiveRank) {
  const auto parts = testing::tiny_parts();
  const TextAttributedGraph g(parts);
  const Selector sel(g);
  const NodeId anchor = 20;
  const std::vector<NodeId> excl{1, 2};
  const auto got = sel.select_demos_global(Strategy::Similarity, 4, 0, excl, anchor);

  std::vector<NodeId> pool;
  std::vector<double> s;
  for (NodeId i = 0; i < 12; ++i) {
    if (i == 1 || i == 2) continue;
    pool.push_back(i);
    s.push_back(oracle::cosine(float_row(parts, anchor), float_row(parts, i)));
  }
  std::vector<NodeId> want;
  for (const auto i : oracle::top_k(s, pool, 4)) want.push_back(pool[i]);
  ASSERT_EQ(got.nodes.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(got.nodes[i].id, want[i]);
    EXPECT_EQ(got.nodes[i].label, *parts.labels[want[i]]);
  }
}

TEST(SelectDemos, ClassAwareOnePerClassInOrder) {
  const TextAttributedGraph g(testing::tiny_parts());
  const Selector sel(g);
  const auto d = sel.select_demos_class_aware(Strategy::Random, 5, {}, 20);
  ASSERT_EQ(d.nodes.size(), 3u);
  for (LabelId c = 0; c < 3; ++c) EXPECT_EQ(d.nodes[c].label, c);
  EXPECT_TRUE(d.skipped_classes.empty());
}

TEST(SelectDemos, ClassAwareFlagsEmptyClass) {
  auto parts = testing::tiny_parts();
  parts.meta.labels.push_back("Case Based");
  const TextAttributedGraph g(parts);
  const Selector sel(g);
  const auto d = sel.select_demos_class_aware(Strategy::PageRank, 0, {}, 20);
  EXPECT_EQ(d.nodes.size(), 3u);
  EXPECT_EQ(d.skipped_classes, (std::vector<std::string>{"Case Based"}));
}

TEST(SelectDemos, ClassAwareSimilarityIsPerClassArgmax) {
  const auto parts = testing::random_parts(60, 0.1, 21, 8, 4);
  const TextAttributedGraph g(parts);
  const Selector sel(g);
  for (NodeId anchor = 0; anchor < 60; anchor += 7) {
    const auto d = sel.select_demos_class_aware(Strategy::Similarity, 0, {}, anchor);
    std::size_t k = 0;
    for (LabelId c = 0; c < 4; ++c) {
      std::optional<NodeId> best;
      double best_s = -2.0;
      for (NodeId i = 0; i < 60; ++i) {
        if (i == anchor || parts.splits[i] != Split::Train || parts.labels[i] != c) continue;
        const double s = oracle::cosine(float_row(parts, anchor), float_row(parts, i));
        if (s > best_s) {
          best_s = s;
          best = i;
        }
      }
      if (!best) continue;
      ASSERT_LT(k, d.nodes.size());
      EXPECT_EQ(d.nodes[k].id, *best) << "anchor " << anchor << " class " << c;
      ++k;
    }
    EXPECT_EQ(k, d.nodes.size());
  }
}

GraphParts pair_parts() {
  auto parts = testing::random_parts(12, 0.3, 31, 4);
  std::vector<PairExample> pairs;
  for (NodeId i = 0; i < 10; ++i) pairs.push_back({{i, static_cast<NodeId>(i + 2)}, i % 2 == 0, Split::Train});
  pairs.push_back({{1, 11}, true, Split::Test});
  parts.pairs = pairs;
  return parts;
}

TEST(SelectEdgeDemos, PageRankMatchesFullSortOracle) {
  const auto parts = pair_parts();
  const TextAttributedGraph g(parts);
  const Selector sel(g);
  const auto got = sel.select_edge_demos(Strategy::PageRank, 3, 0, false, {1, 11});
  ASSERT_EQ(got.pairs.size(), 3u);

  const auto pr = oracle::dense_pagerank(oracle::dense_adjacency(12, parts.edges), 0.85);
  std::vector<NodePair> keys;
  std::vector<double> s;
  for (const auto& p : *parts.pairs) {
    if (p.split != Split::Train) continue;
    keys.push_back(p.pair);
    s.push_back((pr[p.pair.src] + pr[p.pair.dst]) / 2.0);
  }
  const auto want = oracle::top_k(s, keys, 3);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(got.pairs[i].pair, keys[want[i]]);
}

TEST(SelectEdgeDemos, ClassAwarePositiveThenNegative) {
  auto parts = testing::random_parts(4, 0.5, 2);
  parts.pairs = std::vector<PairExample>{{{0, 1}, false, Split::Train}, {{2, 3}, true, Split::Train}};
  const TextAttributedGraph g(parts);
  const Selector sel(g);
  const auto d = sel.select_edge_demos(Strategy::Random, 3, 0, true, {1, 3});
  ASSERT_EQ(d.pairs.size(), 2u);
  EXPECT_TRUE(d.pairs[0].connected);
  EXPECT_FALSE(d.pairs[1].connected);
}

TEST(SelectEdgeDemos, ExcludesAnchorPairBothWays) {
  const auto parts = pair_parts();
  const TextAttributedGraph g(parts);
  const Selector sel(g);
  for (const auto s : {Strategy::Random, Strategy::PageRank, Strategy::Similarity}) {
    for (const NodePair anchor : {NodePair{0, 2}, NodePair{2, 0}}) {
      const auto d = sel.select_edge_demos(s, 10, 4, false, anchor);
      EXPECT_EQ(d.pairs.size(), 9u);
      for (const auto& p : d.pairs) EXPECT_NE(p.pair, (NodePair{0, 2}));
    }
  }
}

TEST(SelectEdgeDemos, NeedsPairs) {
  const TextAttributedGraph g(testing::random_parts(4, 0.5, 2));
  const Selector sel(g);
  EXPECT_THROW(sel.select_edge_demos(Strategy::Random, 3, 0, false, {0, 1}), DatasetError);
}

}  // namespace
}  // namespace gicl
