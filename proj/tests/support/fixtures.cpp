#include "fixtures.hpp"

#include <cstdlib>
#include <random>
#include <stdexcept>

#include <unistd.h>

namespace gicl::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  auto pattern = (fs::temp_directory_path() / "gicl-test-XXXXXX").string();
  if (::mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

GraphParts random_parts(std::size_t n, double p, std::uint64_t seed, std::uint32_t dim, std::size_t num_labels) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<std::size_t> label(0, num_labels - 1);
  std::uniform_int_distribution<int> split(0, 5);
  std::normal_distribution<float> noise(0.0F, 1.0F);

  GraphParts parts;
  parts.meta.name = "random";
  parts.meta.node_noun = "node";
  parts.meta.task_description_nc = "I'm starting a node classification task.";
  parts.meta.task_description_lp = "I'm starting a link prediction task.";
  for (std::size_t l = 0; l < num_labels; ++l) parts.meta.labels.push_back("Label " + std::to_string(l));
  for (std::size_t i = 0; i < n; ++i) {
    parts.texts.push_back("node " + std::to_string(i));
    parts.labels.emplace_back(static_cast<LabelId>(label(rng)));
    const int s = split(rng);
    parts.splits.push_back(s < 3 ? Split::Train : s < 4 ? Split::Val : Split::Test);
  }
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (edge(rng)) parts.edges.push_back({i, j});
    }
  }
  parts.dim = dim;
  parts.embeddings.resize(n * dim);
  for (auto& v : parts.embeddings) v = noise(rng);
  return parts;
}

GraphParts tiny_parts() {
  static const char* const kTopics[] = {"backpropagation in deep networks", "complexity bounds for learning",
                                        "inductive logic programming"};
  GraphParts parts;
  parts.meta.name = "tiny-citations";
  parts.meta.node_noun = "paper";
  parts.meta.edge_semantics = "citation";
  parts.meta.labels = {"Neural Networks", "Theory", "Rule Learning"};
  parts.meta.task_description_nc = kTinyNcDescription;
  parts.meta.task_description_lp = kTinyLpDescription;

  constexpr NodeId n = 30;
  for (NodeId i = 0; i < n; ++i) {
    const auto label = static_cast<LabelId>(i % 3);
    parts.texts.push_back("Paper " + std::to_string(i) + ": a study of " + kTopics[label]);
    parts.labels.emplace_back(label);
    parts.splits.push_back(i < 12 ? Split::Train : i < 18 ? Split::Val : Split::Test);
  }
  parts.labels[27].reset();

  for (NodeId i = 0; i < n; ++i) parts.edges.push_back({i, (i + 1) % n});
  for (NodeId i = 0; i + 3 < n; i += 2) parts.edges.push_back({i, i + 3});

  parts.dim = 8;
  parts.embeddings.assign(n * parts.dim, 0.0F);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<float> noise(0.0F, 0.3F);
  for (NodeId i = 0; i < n; ++i) {
    for (std::uint32_t d = 0; d < parts.dim; ++d) parts.embeddings[i * parts.dim + d] = noise(rng);
    parts.embeddings[i * parts.dim + (i % 3)] += 1.0F;
  }

  std::vector<PairExample> pairs;
  for (NodeId i = 0; i < 11; ++i) pairs.push_back({{i, i + 1}, true, Split::Train});
  for (NodeId i = 0; i < 6; ++i) pairs.push_back({{i, i + 6}, false, Split::Train});
  for (NodeId i = 18; i < 26; i += 2) pairs.push_back({{i, i + 1}, true, Split::Test});
  pairs.push_back({{18, 25}, false, Split::Test});
  pairs.push_back({{19, 27}, false, Split::Test});
  pairs.push_back({{21, 28}, false, Split::Test});
  pairs.push_back({{22, 29}, false, Split::Test});
  parts.pairs = std::move(pairs);
  return parts;
}

fs::path write_tiny(const fs::path& dir) {
  write_dataset(dir, tiny_parts());
  return dir;
}

}  // namespace gicl::testing
