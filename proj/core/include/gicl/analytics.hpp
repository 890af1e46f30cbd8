#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gicl/graph.hpp"

namespace gicl {

/// Nodes at shortest-path distance exactly `hops` from `anchor`, ascending.
/// `hops` must be 1 or 2 (std::invalid_argument otherwise); an invalid anchor
/// throws std::out_of_range.
std::vector<NodeId> khop_frontier(const TextAttributedGraph& g, NodeId anchor, int hops);

struct PageRankParams {
  double damping = 0.85;
  double tolerance = 1e-8;  // L1 change between successive iterates
  std::size_t max_iterations = 100;

  /// Throws std::invalid_argument unless damping is in (0,1), tolerance >= 0
  /// and max_iterations >= 1.
  void validate() const;
};

struct PageRankResult {
  std::vector<double> scores;  // sums to 1
  std::size_t iterations = 0;
  bool converged = false;
};

/// Power iteration over the undirected adjacency with uniform start and
/// teleport. Mass held by isolated nodes is spread uniformly every step.
PageRankResult pagerank(const TextAttributedGraph& g, const PageRankParams& params = {});

struct CosineResult {
  double value = 0.0;
  bool zero_norm = false;  // one side had zero norm; value is then 0
};

/// Throws std::invalid_argument on a dimension mismatch.
CosineResult cosine(std::span<const double> a, std::span<const double> b);
CosineResult cosine(std::span<const float> a, std::span<const float> b);

double edge_pagerank(std::span<const double> scores, NodePair e);

std::vector<double> edge_embedding(const TextAttributedGraph& g, NodePair e);

}  // namespace gicl
