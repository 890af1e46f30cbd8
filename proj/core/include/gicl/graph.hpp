#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gicl {

using NodeId = std::uint32_t;
using LabelId = std::uint32_t;

enum class Split : std::uint8_t { Train, Val, Test };

std::string_view to_string(Split s);
std::optional<Split> parse_split(std::string_view s);

struct NodePair {
  NodeId src = 0;
  NodeId dst = 0;

  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

/// A labelled node pair used for link prediction (train demos, test trials).
struct PairExample {
  NodePair pair;
  bool connected = false;
  Split split = Split::Train;
};

/// Raised for any dataset that fails to load or violates a graph invariant.
/// When the problem is tied to a file record, `file()` and `line()` say where.
class DatasetError : public std::runtime_error {
 public:
  explicit DatasetError(const std::string& what);
  DatasetError(const std::string& file, std::size_t line, const std::string& what);

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_ = 0;
};

struct DatasetMeta {
  std::string name;
  bool directed = false;
  std::string node_noun = "node";
  std::string edge_semantics;
  std::vector<std::string> labels;
  std::string task_description_nc;
  std::string task_description_lp;
};

/// Raw, unvalidated pieces of a graph. Node ids are dense: entry i of every
/// per-node vector (and embedding row i) belongs to node i.
struct GraphParts {
  DatasetMeta meta;
  std::vector<std::string> texts;
  std::vector<std::optional<LabelId>> labels;
  std::vector<Split> splits;
  std::vector<NodePair> edges;
  std::vector<float> embeddings;  // row-major, texts.size() x dim
  std::uint32_t dim = 0;
  std::optional<std::vector<PairExample>> pairs;
};

/// Immutable text-attributed graph. Traversal always sees the undirected
/// adjacency; `directed()` is kept for provenance only.
class TextAttributedGraph {
 public:
  /// Validates every invariant and builds the sorted adjacency.
  /// Throws DatasetError naming the offending node or edge.
  explicit TextAttributedGraph(GraphParts parts);

  const std::string& name() const noexcept { return meta_.name; }
  bool directed() const noexcept { return meta_.directed; }
  const DatasetMeta& meta() const noexcept { return meta_; }
  const std::string& node_noun() const noexcept { return meta_.node_noun; }
  const std::string& edge_semantics() const noexcept { return meta_.edge_semantics; }
  const std::string& task_description_nc() const noexcept { return meta_.task_description_nc; }
  const std::string& task_description_lp() const noexcept { return meta_.task_description_lp; }
  const std::vector<std::string>& label_vocabulary() const noexcept { return meta_.labels; }

  std::size_t node_count() const noexcept { return texts_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::uint32_t dim() const noexcept { return dim_; }

  bool contains(NodeId id) const noexcept { return id < node_count(); }
  /// Throws std::out_of_range for ids outside 0..node_count-1.
  void check_node(NodeId id) const;

  const std::string& text(NodeId id) const;
  std::optional<LabelId> label(NodeId id) const;
  const std::string& label_name(LabelId label) const;
  std::optional<LabelId> find_label(std::string_view name) const;
  Split split(NodeId id) const;
  std::span<const NodeId> neighbors(NodeId id) const;
  std::span<const float> embedding(NodeId id) const;

  bool has_pairs() const noexcept { return pairs_.has_value(); }
  /// Throws DatasetError when the dataset shipped without pairs.jsonl.
  std::span<const PairExample> pairs() const;

 private:
  DatasetMeta meta_;
  std::vector<std::string> texts_;
  std::vector<std::optional<LabelId>> labels_;
  std::vector<Split> splits_;
  std::vector<std::size_t> offsets_;  // CSR row starts, size node_count + 1
  std::vector<NodeId> targets_;
  std::size_t edge_count_ = 0;
  std::vector<float> embeddings_;
  std::uint32_t dim_ = 0;
  std::optional<std::vector<PairExample>> pairs_;
};

/// Reads meta.json, nodes.jsonl, edges.csv, embeddings.bin and the optional
/// pairs.jsonl from `dir`.
TextAttributedGraph load_dataset(const std::filesystem::path& dir);

/// Hex SHA-256 over the dataset files in a fixed order.
std::string dataset_digest(const std::filesystem::path& dir);

/// Ascending ids of the nodes in `split`.
std::vector<NodeId> split_members(const TextAttributedGraph& g, Split split);

/// Writes `parts` in the on-disk dataset layout. Used by fixtures and tools.
void write_dataset(const std::filesystem::path& dir, const GraphParts& parts);

}  // namespace gicl
