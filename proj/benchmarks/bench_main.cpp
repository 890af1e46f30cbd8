#include <random>

#include <benchmark/benchmark.h>

#include "gicl/analytics.hpp"
#include "gicl/extract.hpp"
#include "gicl/method_code.hpp"
#include "gicl/prompt.hpp"
#include "gicl/selection.hpp"

namespace {

using namespace gicl;

// G(n, p) with fixed seeds; labels cycle over four classes, two thirds train.
GraphParts synthetic(std::size_t n, double avg_degree, std::uint32_t dim = 64) {
  GraphParts p;
  p.meta.name = "synthetic";
  p.meta.node_noun = "paper";
  p.meta.labels = {"A", "B", "C", "D"};
  p.meta.task_description_nc = "Classify the paper.";
  p.meta.task_description_lp = "Answer 0 or 1.";
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<float> unit(-1.0f, 1.0f);
  for (std::size_t i = 0; i < n; ++i) {
    p.texts.push_back("Paper " + std::to_string(i) + " on a synthetic topic with a moderately long abstract.");
    p.labels.emplace_back(static_cast<LabelId>(i % 4));
    p.splits.push_back(i % 3 == 2 ? Split::Test : Split::Train);
    for (std::uint32_t d = 0; d < dim; ++d) p.embeddings.push_back(unit(rng));
  }
  p.dim = dim;
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  const auto m = static_cast<std::size_t>(static_cast<double>(n) * avg_degree / 2.0);
  for (std::size_t e = 0; e < m; ++e) {
    const NodeId a = pick(rng);
    const NodeId b = pick(rng);
    if (a != b) p.edges.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(p.edges.begin(), p.edges.end());
  p.edges.erase(std::unique(p.edges.begin(), p.edges.end()), p.edges.end());
  return p;
}

void BM_PageRank(benchmark::State& state) {
  const TextAttributedGraph g(synthetic(static_cast<std::size_t>(state.range(0)), 8.0, 4));
  for (auto _ : state) benchmark::DoNotOptimize(pagerank(g).scores.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.edge_count()));
}
BENCHMARK(BM_PageRank)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SelectNeighbors(benchmark::State& state) {
  const TextAttributedGraph g(synthetic(5000, 12.0));
  const Selector sel(g);
  const auto strategy = static_cast<Strategy>(state.range(0));
  NodeId anchor = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sel.select_neighbors(anchor, 2, strategy, 6, 1, false));
    anchor = (anchor + 97) % 5000;
  }
}
BENCHMARK(BM_SelectNeighbors)->DenseRange(0, 2)->ArgName("strategy");

void BM_SelectDemos(benchmark::State& state) {
  const TextAttributedGraph g(synthetic(5000, 12.0));
  const Selector sel(g);
  const auto strategy = static_cast<Strategy>(state.range(0));
  NodeId anchor = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sel.select_demos_global(strategy, 6, 1, {}, anchor));
    anchor = (anchor + 99) % 5000;
  }
}
BENCHMARK(BM_SelectDemos)->DenseRange(0, 2)->ArgName("strategy");

void BM_RenderNc(benchmark::State& state) {
  const TextAttributedGraph g(synthetic(5000, 12.0));
  const Selector sel(g);
  const TemplatePack pack;
  const auto code = parse_code("2SGS");
  RenderOptions opt;
  opt.allow_any_split = true;
  NodeId anchor = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(render_nc(sel, code, anchor, 3, opt, pack).user_text.size());
    anchor = (anchor + 31) % 5000;
  }
}
BENCHMARK(BM_RenderNc);

void BM_ExtractLabel(benchmark::State& state) {
  const std::vector<std::string> vocab{"Case Based", "Genetic Algorithms", "Neural Networks",
                                       "Probabilistic Methods", "Reinforcement Learning", "Rule Learning", "Theory"};
  const std::string reply =
      "Looking at the abstract and the neighbours, the paper discusses gradient training of layered models, "
      "so the most fitting category is Neural Networks rather than Theory.";
  for (auto _ : state) benchmark::DoNotOptimize(extract_class_label(reply, vocab));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(reply.size()));
}
BENCHMARK(BM_ExtractLabel);

}  // namespace

BENCHMARK_MAIN();
