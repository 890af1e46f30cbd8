#include "gicl/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "gicl/digest.hpp"
#include "json.hpp"

namespace gicl {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr std::string_view kMetaFile = "meta.json";
constexpr std::string_view kNodesFile = "nodes.jsonl";
constexpr std::string_view kEdgesFile = "edges.csv";
constexpr std::string_view kEmbeddingsFile = "embeddings.bin";
constexpr std::string_view kPairsFile = "pairs.jsonl";

constexpr std::size_t kEmbeddingHeaderBytes = 16;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(path.string(), 0, "missing or unreadable file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Calls fn(line_number, line) for each non-blank line. Line numbers are 1-based.
template <typename Fn>
void for_each_line(std::string_view content, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    ++line_no;
    const auto line = trim(content.substr(pos, nl - pos));
    if (!line.empty()) fn(line_no, line);
    if (nl == content.size()) break;
    pos = nl + 1;
  }
}

std::uint32_t read_u32_le(const std::string& bytes, std::size_t at) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + 3])) << 24;
}

void append_u32_le(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xFF));
  }
}

std::int64_t json_int(const json& obj, const char* key, const std::string& file, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw DatasetError(file, line, std::string("field '") + key + "' must be an integer");
  }
  return it->get<std::int64_t>();
}

std::string json_string(const json& obj, const char* key, const std::string& file, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw DatasetError(file, line, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

json parse_json_line(std::string_view line, const std::string& file, std::size_t line_no) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw DatasetError(file, line_no, "malformed JSON record");
  }
  return obj;
}

DatasetMeta read_meta(const fs::path& dir) {
  const auto path = dir / kMetaFile;
  const auto content = read_file(path);
  json doc = json::parse(content, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw DatasetError(path.string(), 0, "malformed JSON document");
  }
  DatasetMeta meta;
  const auto file = path.string();
  meta.name = json_string(doc, "name", file, 0);
  if (!doc.contains("directed") || !doc["directed"].is_boolean()) {
    throw DatasetError(file, 0, "field 'directed' must be a boolean");
  }
  meta.directed = doc["directed"].get<bool>();
  meta.node_noun = json_string(doc, "node_noun", file, 0);
  meta.edge_semantics = json_string(doc, "edge_semantics", file, 0);
  if (!doc.contains("labels") || !doc["labels"].is_array()) {
    throw DatasetError(file, 0, "field 'labels' must be an array of strings");
  }
  for (const auto& l : doc["labels"]) {
    if (!l.is_string()) throw DatasetError(file, 0, "field 'labels' must be an array of strings");
    meta.labels.push_back(l.get<std::string>());
  }
  meta.task_description_nc = json_string(doc, "task_description_nc", file, 0);
  meta.task_description_lp = json_string(doc, "task_description_lp", file, 0);
  return meta;
}

}  // namespace

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "unknown";
}

std::optional<Split> parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  return std::nullopt;
}

DatasetError::DatasetError(const std::string& what) : std::runtime_error(what) {}

DatasetError::DatasetError(const std::string& file, std::size_t line, const std::string& what)
    : std::runtime_error(file + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
      file_(file),
      line_(line) {}

TextAttributedGraph::TextAttributedGraph(GraphParts parts)
    : meta_(std::move(parts.meta)),
      texts_(std::move(parts.texts)),
      labels_(std::move(parts.labels)),
      splits_(std::move(parts.splits)),
      embeddings_(std::move(parts.embeddings)),
      dim_(parts.dim),
      pairs_(std::move(parts.pairs)) {
  const std::size_t n = texts_.size();
  if (n == 0) throw DatasetError("dataset has no nodes");
  if (n > std::numeric_limits<NodeId>::max()) throw DatasetError("too many nodes");
  if (labels_.size() != n || splits_.size() != n) {
    throw DatasetError("per-node label/split vectors do not match node count");
  }

  {
    std::set<std::string_view> seen;
    for (const auto& l : meta_.labels) {
      if (!seen.insert(l).second) throw DatasetError("duplicate label '" + l + "' in vocabulary");
    }
  }
  for (NodeId i = 0; i < n; ++i) {
    if (labels_[i] && *labels_[i] >= meta_.labels.size()) {
      throw DatasetError("node " + std::to_string(i) + ": label outside vocabulary");
    }
    if (splits_[i] == Split::Train && !labels_[i]) {
      throw DatasetError("node " + std::to_string(i) + ": train node without a label");
    }
  }

  if (dim_ == 0) throw DatasetError("embedding dimension must be positive");
  if (embeddings_.size() != n * static_cast<std::size_t>(dim_)) {
    throw DatasetError("embedding row count " + std::to_string(embeddings_.size() / dim_) +
                       " does not match node count " + std::to_string(n));
  }
  for (std::size_t i = 0; i < embeddings_.size(); ++i) {
    if (!std::isfinite(embeddings_[i])) {
      throw DatasetError("node " + std::to_string(i / dim_) + ": non-finite embedding value");
    }
  }

  // Directed inputs may list a->b and b->a; both collapse to one undirected
  // neighbour relation. Exact repeats are rejected in either mode.
  std::set<NodePair> seen_edges;
  std::vector<NodePair> undirected;
  undirected.reserve(parts.edges.size());
  for (std::size_t k = 0; k < parts.edges.size(); ++k) {
    const auto e = parts.edges[k];
    const auto where = "edge #" + std::to_string(k) + " (" + std::to_string(e.src) + "," +
                       std::to_string(e.dst) + ")";
    if (e.src >= n || e.dst >= n) throw DatasetError(where + ": node id out of range");
    if (e.src == e.dst) throw DatasetError(where + ": self-loop");
    const NodePair key = meta_.directed ? e : NodePair{std::min(e.src, e.dst), std::max(e.src, e.dst)};
    if (!seen_edges.insert(key).second) throw DatasetError(where + ": duplicate edge");
    undirected.push_back({std::min(e.src, e.dst), std::max(e.src, e.dst)});
  }
  std::sort(undirected.begin(), undirected.end());
  undirected.erase(std::unique(undirected.begin(), undirected.end()), undirected.end());
  edge_count_ = undirected.size();

  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : undirected) {
    ++degree[e.src];
    ++degree[e.dst];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  targets_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : undirected) {
    targets_[cursor[e.src]++] = e.dst;
    targets_[cursor[e.dst]++] = e.src;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
  }

  if (pairs_) {
    std::set<NodePair> seen_pairs;
    for (std::size_t k = 0; k < pairs_->size(); ++k) {
      const auto& p = (*pairs_)[k];
      const auto where = "pair #" + std::to_string(k) + " (" + std::to_string(p.pair.src) + "," +
                         std::to_string(p.pair.dst) + ")";
      if (p.pair.src >= n || p.pair.dst >= n) throw DatasetError(where + ": node id out of range");
      if (p.pair.src == p.pair.dst) throw DatasetError(where + ": src equals dst");
      if (p.split == Split::Val) throw DatasetError(where + ": pair split must be train or test");
      if (!seen_pairs.insert(p.pair).second) throw DatasetError(where + ": duplicate pair");
    }
    std::sort(pairs_->begin(), pairs_->end(),
              [](const PairExample& a, const PairExample& b) { return a.pair < b.pair; });
  }
}

void TextAttributedGraph::check_node(NodeId id) const {
  if (!contains(id)) {
    throw std::out_of_range("node id " + std::to_string(id) + " out of range (node_count " +
                            std::to_string(node_count()) + ")");
  }
}

const std::string& TextAttributedGraph::text(NodeId id) const {
  check_node(id);
  return texts_[id];
}

std::optional<LabelId> TextAttributedGraph::label(NodeId id) const {
  check_node(id);
  return labels_[id];
}

const std::string& TextAttributedGraph::label_name(LabelId label) const {
  if (label >= meta_.labels.size()) throw std::out_of_range("label id out of range");
  return meta_.labels[label];
}

std::optional<LabelId> TextAttributedGraph::find_label(std::string_view name) const {
  const auto it = std::find(meta_.labels.begin(), meta_.labels.end(), name);
  if (it == meta_.labels.end()) return std::nullopt;
  return static_cast<LabelId>(it - meta_.labels.begin());
}

Split TextAttributedGraph::split(NodeId id) const {
  check_node(id);
  return splits_[id];
}

std::span<const NodeId> TextAttributedGraph::neighbors(NodeId id) const {
  check_node(id);
  return {targets_.data() + offsets_[id], offsets_[id + 1] - offsets_[id]};
}

std::span<const float> TextAttributedGraph::embedding(NodeId id) const {
  check_node(id);
  return {embeddings_.data() + static_cast<std::size_t>(id) * dim_, dim_};
}

std::span<const PairExample> TextAttributedGraph::pairs() const {
  if (!pairs_) {
    throw DatasetError("dataset '" + meta_.name +
                       "' has no pairs.jsonl; link-prediction demonstrations and trials need one");
  }
  return *pairs_;
}

TextAttributedGraph load_dataset(const fs::path& dir) {
  GraphParts parts;
  parts.meta = read_meta(dir);

  // nodes.jsonl
  {
    const auto path = dir / kNodesFile;
    const auto file = path.string();
    const auto content = read_file(path);
    struct Record {
      std::int64_t id;
      std::string text;
      std::optional<std::string> label;
      Split split;
      std::size_t line;
    };
    std::vector<Record> records;
    for_each_line(content, [&](std::size_t line_no, std::string_view line) {
      const auto obj = parse_json_line(line, file, line_no);
      Record r;
      r.id = json_int(obj, "id", file, line_no);
      r.text = json_string(obj, "text", file, line_no);
      const auto lab = obj.find("label");
      if (lab == obj.end()) throw DatasetError(file, line_no, "field 'label' is required (string or null)");
      if (lab->is_string()) {
        r.label = lab->get<std::string>();
      } else if (!lab->is_null()) {
        throw DatasetError(file, line_no, "field 'label' must be a string or null");
      }
      const auto split = parse_split(json_string(obj, "split", file, line_no));
      if (!split) throw DatasetError(file, line_no, "field 'split' must be train, val or test");
      r.split = *split;
      r.line = line_no;
      records.push_back(std::move(r));
    });

    const auto n = records.size();
    parts.texts.resize(n);
    parts.labels.resize(n);
    parts.splits.resize(n);
    std::vector<bool> seen(n, false);
    for (auto& r : records) {
      if (r.id < 0 || static_cast<std::uint64_t>(r.id) >= n) {
        throw DatasetError(file, r.line,
                           "node id " + std::to_string(r.id) + " out of range (expected 0.." +
                               std::to_string(n == 0 ? 0 : n - 1) + ")");
      }
      const auto id = static_cast<std::size_t>(r.id);
      if (seen[id]) throw DatasetError(file, r.line, "duplicate node id " + std::to_string(id));
      seen[id] = true;
      if (r.label) {
        const auto it = std::find(parts.meta.labels.begin(), parts.meta.labels.end(), *r.label);
        if (it == parts.meta.labels.end()) {
          throw DatasetError(file, r.line,
                             "node " + std::to_string(id) + ": label '" + *r.label +
                                 "' is not in the label vocabulary");
        }
        parts.labels[id] = static_cast<LabelId>(it - parts.meta.labels.begin());
      }
      if (r.split == Split::Train && !r.label) {
        throw DatasetError(file, r.line, "node " + std::to_string(id) + ": train node without a label");
      }
      parts.texts[id] = std::move(r.text);
      parts.splits[id] = r.split;
    }
  }
  const auto n = parts.texts.size();

  // edges.csv
  {
    const auto path = dir / kEdgesFile;
    const auto file = path.string();
    const auto content = read_file(path);
    std::set<NodePair> seen;
    auto parse_id = [&](std::string_view s, std::size_t line_no) {
      s = trim(s);
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw DatasetError(file, line_no, "malformed edge record (expected 'src,dst')");
      }
      if (v >= n) throw DatasetError(file, line_no, "node id " + std::to_string(v) + " out of range");
      return static_cast<NodeId>(v);
    };
    for_each_line(content, [&](std::size_t line_no, std::string_view line) {
      const auto comma = line.find(',');
      if (comma == std::string_view::npos) {
        throw DatasetError(file, line_no, "malformed edge record (expected 'src,dst')");
      }
      const NodePair e{parse_id(line.substr(0, comma), line_no), parse_id(line.substr(comma + 1), line_no)};
      if (e.src == e.dst) throw DatasetError(file, line_no, "self-loop on node " + std::to_string(e.src));
      const NodePair key =
          parts.meta.directed ? e : NodePair{std::min(e.src, e.dst), std::max(e.src, e.dst)};
      if (!seen.insert(key).second) throw DatasetError(file, line_no, "duplicate edge");
      parts.edges.push_back(e);
    });
  }

  // embeddings.bin
  {
    const auto path = dir / kEmbeddingsFile;
    const auto file = path.string();
    const auto bytes = read_file(path);
    if (bytes.size() < kEmbeddingHeaderBytes) throw DatasetError(file, 0, "truncated header");
    if (bytes.compare(0, 4, "GICL") != 0) throw DatasetError(file, 0, "bad magic (expected 'GICL')");
    if (bytes[4] != 1) throw DatasetError(file, 0, "unsupported version " + std::to_string(int(bytes[4])));
    if (bytes[5] != 1) throw DatasetError(file, 0, "unsupported dtype " + std::to_string(int(bytes[5])));
    if (bytes[6] != 0 || bytes[7] != 0) throw DatasetError(file, 0, "reserved header bytes must be zero");
    const auto rows = read_u32_le(bytes, 8);
    const auto dim = read_u32_le(bytes, 12);
    if (dim == 0) throw DatasetError(file, 0, "embedding dimension must be positive");
    if (rows != n) {
      throw DatasetError(file, 0,
                         "embedding row count " + std::to_string(rows) + " does not match node count " +
                             std::to_string(n));
    }
    const auto expected = kEmbeddingHeaderBytes + std::uint64_t{rows} * dim * 4;
    if (bytes.size() != expected) {
      throw DatasetError(file, 0,
                         "payload size " + std::to_string(bytes.size()) + " does not match header (" +
                             std::to_string(expected) + " bytes expected)");
    }
    parts.dim = dim;
    parts.embeddings.resize(std::size_t{rows} * dim);
    for (std::size_t i = 0; i < parts.embeddings.size(); ++i) {
      const float v = std::bit_cast<float>(read_u32_le(bytes, kEmbeddingHeaderBytes + 4 * i));
      if (!std::isfinite(v)) {
        throw DatasetError(file, 0, "node " + std::to_string(i / dim) + ": non-finite embedding value");
      }
      parts.embeddings[i] = v;
    }
  }

  // pairs.jsonl (optional)
  {
    const auto path = dir / kPairsFile;
    if (fs::exists(path)) {
      const auto file = path.string();
      const auto content = read_file(path);
      std::vector<PairExample> pairs;
      std::set<NodePair> seen;
      for_each_line(content, [&](std::size_t line_no, std::string_view line) {
        const auto obj = parse_json_line(line, file, line_no);
        const auto src = json_int(obj, "src", file, line_no);
        const auto dst = json_int(obj, "dst", file, line_no);
        const auto connected = json_int(obj, "connected", file, line_no);
        if (src < 0 || dst < 0 || static_cast<std::uint64_t>(src) >= n ||
            static_cast<std::uint64_t>(dst) >= n) {
          throw DatasetError(file, line_no, "node id out of range");
        }
        if (src == dst) throw DatasetError(file, line_no, "src equals dst");
        if (connected != 0 && connected != 1) throw DatasetError(file, line_no, "'connected' must be 0 or 1");
        const auto split = parse_split(json_string(obj, "split", file, line_no));
        if (!split || *split == Split::Val) throw DatasetError(file, line_no, "field 'split' must be train or test");
        PairExample p{{static_cast<NodeId>(src), static_cast<NodeId>(dst)}, connected == 1, *split};
        if (!seen.insert(p.pair).second) throw DatasetError(file, line_no, "duplicate pair");
        pairs.push_back(p);
      });
      parts.pairs = std::move(pairs);
    }
  }

  return TextAttributedGraph(std::move(parts));
}

std::string dataset_digest(const fs::path& dir) {
  Sha256 h;
  for (const auto name : {kMetaFile, kNodesFile, kEdgesFile, kEmbeddingsFile, kPairsFile}) {
    const auto path = dir / name;
    if (!fs::exists(path)) continue;
    const auto content = read_file(path);
    h.update(name);
    h.update(std::string_view("\0", 1));
    h.update(std::to_string(content.size()));
    h.update(std::string_view("\0", 1));
    h.update(content);
  }
  return h.hex_digest();
}

std::vector<NodeId> split_members(const TextAttributedGraph& g, Split split) {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (g.split(i) == split) out.push_back(i);
  }
  return out;
}

void write_dataset(const fs::path& dir, const GraphParts& parts) {
  fs::create_directories(dir);
  auto open = [&](std::string_view name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };

  {
    json meta = {
        {"name", parts.meta.name},
        {"directed", parts.meta.directed},
        {"node_noun", parts.meta.node_noun},
        {"edge_semantics", parts.meta.edge_semantics},
        {"labels", parts.meta.labels},
        {"task_description_nc", parts.meta.task_description_nc},
        {"task_description_lp", parts.meta.task_description_lp},
    };
    open(kMetaFile) << meta.dump(2) << '\n';
  }
  {
    auto out = open(kNodesFile);
    for (std::size_t i = 0; i < parts.texts.size(); ++i) {
      json rec = {{"id", i}, {"text", parts.texts[i]}, {"label", nullptr}, {"split", to_string(parts.splits[i])}};
      if (parts.labels[i]) rec["label"] = parts.meta.labels.at(*parts.labels[i]);
      out << rec.dump() << '\n';
    }
  }
  {
    auto out = open(kEdgesFile);
    for (const auto& e : parts.edges) out << e.src << ',' << e.dst << '\n';
  }
  {
    std::string bytes = "GICL";
    bytes.push_back(1);
    bytes.push_back(1);
    bytes.push_back(0);
    bytes.push_back(0);
    const auto rows = parts.dim == 0 ? 0 : parts.embeddings.size() / parts.dim;
    append_u32_le(bytes, static_cast<std::uint32_t>(rows));
    append_u32_le(bytes, parts.dim);
    for (const float v : parts.embeddings) append_u32_le(bytes, std::bit_cast<std::uint32_t>(v));
    open(kEmbeddingsFile) << bytes;
  }
  if (parts.pairs) {
    auto out = open(kPairsFile);
    for (const auto& p : *parts.pairs) {
      json rec = {{"src", p.pair.src},
                  {"dst", p.pair.dst},
                  {"connected", p.connected ? 1 : 0},
                  {"split", to_string(p.split)}};
      out << rec.dump() << '\n';
    }
  } else {
    std::error_code ec;
    fs::remove(dir / kPairsFile, ec);
  }
}

}  // namespace gicl
