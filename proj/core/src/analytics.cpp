#include "gicl/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gicl {

std::vector<NodeId> khop_frontier(const TextAttributedGraph& g, NodeId anchor, int hops) {
  if (hops != 1 && hops != 2) {
    throw std::invalid_argument("hop count must be 1 or 2, got " + std::to_string(hops));
  }
  g.check_node(anchor);
  const auto first = g.neighbors(anchor);
  if (hops == 1) return {first.begin(), first.end()};

  std::vector<NodeId> out;
  for (const NodeId mid : first) {
    for (const NodeId v : g.neighbors(mid)) {
      if (v == anchor) continue;
      if (std::binary_search(first.begin(), first.end(), v)) continue;
      out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void PageRankParams::validate() const {
  if (!(damping > 0.0 && damping < 1.0)) throw std::invalid_argument("damping must lie in (0,1)");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be non-negative");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
}

PageRankResult pagerank(const TextAttributedGraph& g, const PageRankParams& params) {
  params.validate();
  const std::size_t n = g.node_count();
  const double inv_n = 1.0 / static_cast<double>(n);

  PageRankResult result;
  std::vector<double> cur(n, inv_n);
  std::vector<double> next(n);
  std::vector<double> out_share(n);

  for (std::size_t it = 0; it < params.max_iterations; ++it) {
    double dangling = 0.0;
    for (NodeId u = 0; u < n; ++u) {
      const auto deg = g.neighbors(u).size();
      if (deg == 0) {
        dangling += cur[u];
        out_share[u] = 0.0;
      } else {
        out_share[u] = cur[u] / static_cast<double>(deg);
      }
    }
    const double base = (1.0 - params.damping) * inv_n + params.damping * dangling * inv_n;
    double delta = 0.0;
    double total = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      double incoming = 0.0;
      for (const NodeId u : g.neighbors(v)) incoming += out_share[u];
      next[v] = base + params.damping * incoming;
      total += next[v];
    }
    // Renormalise against floating-point drift.
    for (NodeId v = 0; v < n; ++v) {
      next[v] /= total;
      delta += std::abs(next[v] - cur[v]);
    }
    cur.swap(next);
    result.iterations = it + 1;
    if (delta <= params.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(cur);
  return result;
}

namespace {

template <typename T>
CosineResult cosine_impl(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i];
    const double y = b[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) return {0.0, true};
  return {std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0), false};
}

}  // namespace

CosineResult cosine(std::span<const double> a, std::span<const double> b) { return cosine_impl(a, b); }
CosineResult cosine(std::span<const float> a, std::span<const float> b) { return cosine_impl(a, b); }

double edge_pagerank(std::span<const double> scores, NodePair e) {
  if (e.src >= scores.size() || e.dst >= scores.size()) {
    throw std::out_of_range("edge endpoint out of range of the score vector");
  }
  return 0.5 * (scores[e.src] + scores[e.dst]);
}

std::vector<double> edge_embedding(const TextAttributedGraph& g, NodePair e) {
  const auto a = g.embedding(e.src);
  const auto b = g.embedding(e.dst);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = 0.5 * (static_cast<double>(a[i]) + static_cast<double>(b[i]));
  }
  return out;
}

}  // namespace gicl
