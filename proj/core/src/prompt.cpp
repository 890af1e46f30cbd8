#include "gicl/prompt.hpp"

#include <map>

#include "gicl/digest.hpp"
#include "json.hpp"

namespace gicl {

namespace {

using Values = std::map<std::string, std::string, std::less<>>;

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

std::string numbered(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += '(' + std::to_string(i + 1) + ") " + lines[i];
  }
  return out;
}

class Renderer {
 public:
  Renderer(const TextAttributedGraph& g, const RenderOptions& options, PromptAudit& audit)
      : g_(g), opt_(options), audit_(audit) {}

  std::string field(NodeId id, std::size_t cap) {
    std::string text = g_.text(id);
    if (truncate_utf8(text, cap)) ++audit_.truncated_fields;
    return text;
  }
  std::string item(NodeId id) { return field(id, opt_.max_item_chars); }
  std::string anchor(NodeId id) { return field(id, opt_.max_anchor_chars); }

  std::string labelled(NodeId id, LabelId label) {
    return item(id) + " (Category: " + g_.label_name(label) + ")";
  }

 private:
  const TextAttributedGraph& g_;
  const RenderOptions& opt_;
  PromptAudit& audit_;
};

TemplateVariant pick_variant(Task task, bool structure, bool few) {
  if (task == Task::NodeClassification) {
    if (structure) return few ? TemplateVariant::NcFewStruct : TemplateVariant::NcZeroStruct;
    return few ? TemplateVariant::NcFew : TemplateVariant::NcZero;
  }
  if (structure) return few ? TemplateVariant::LpFewStruct : TemplateVariant::LpZeroStruct;
  return few ? TemplateVariant::LpFew : TemplateVariant::LpZero;
}

PromptBundle finish(PromptBundle bundle, const TemplatePack& pack, Values values, const RenderOptions& options,
                    bool has_structure, bool has_examples) {
  auto& audit = bundle.audit;
  audit.variant = pick_variant(audit.task, has_structure, has_examples);
  audit.cot = options.cot;
  values["cot"] = options.cot ? " " + options.cot_sentence : std::string();
  bundle.user_text = substitute(pack.get(audit.variant), values);
  Sha256 h;
  h.update(bundle.system_text);
  h.update(bundle.user_text);
  audit.digest = h.hex_digest();
  return bundle;
}

}  // namespace

std::string_view to_string(Task t) noexcept { return t == Task::NodeClassification ? "nc" : "lp"; }

std::optional<Task> parse_task(std::string_view s) {
  if (s == "nc") return Task::NodeClassification;
  if (s == "lp") return Task::LinkPrediction;
  return std::nullopt;
}

bool truncate_utf8(std::string& text, std::size_t max_chars) {
  if (max_chars == 0) return false;
  std::size_t chars = 0;
  std::size_t cut = std::string::npos;  // byte offset where code point max_chars-1 ends
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (is_continuation(static_cast<unsigned char>(text[i]))) continue;
    if (chars == max_chars - 1) cut = i;
    ++chars;
    if (chars > max_chars) {
      text.resize(cut);
      text += kEllipsis;
      return true;
    }
  }
  return false;
}

PromptBundle render_nc(const Selector& selector, const MethodCode& code, NodeId anchor, std::uint64_t seed,
                       const RenderOptions& options, const TemplatePack& pack) {
  const auto& g = selector.graph();
  g.check_node(anchor);
  if (!options.allow_any_split && g.split(anchor) != Split::Test) {
    throw RenderError("node " + std::to_string(anchor) + " is in the " + std::string(to_string(g.split(anchor))) +
                      " split; node-classification anchors must come from the test split");
  }
  if (g.task_description_nc().empty()) {
    throw RenderError("dataset '" + g.name() + "' has no node-classification task description");
  }
  if (g.label_vocabulary().empty()) {
    throw RenderError("dataset '" + g.name() + "' has an empty label vocabulary");
  }

  PromptBundle bundle;
  bundle.code = code;
  bundle.system_text = g.task_description_nc();
  auto& audit = bundle.audit;
  audit.task = Task::NodeClassification;
  audit.code = format_code(code);
  audit.anchor = anchor;

  Renderer r(g, options, audit);
  std::vector<std::string> neighbor_lines;
  std::vector<std::string> example_lines;
  std::vector<NodeId> exclusions;

  if (code.structure) {
    const auto& s = *code.structure;
    auto sel = selector.select_neighbors(anchor, s.hop, s.strategy, options.budget.max_neighbors, seed, s.primed);
    if (!s.primed && options.label_unprimed_neighbors) {
      for (auto& it : sel.items) {
        if (g.split(it.id) == Split::Train) it.label = g.label(it.id);
      }
    }
    audit.hop = s.hop;
    audit.neighbors_labeled = s.primed;
    audit.neighbor_pool = sel.pool_size;
    audit.neighbors = sel.items;
    for (const auto& it : sel.items) {
      exclusions.push_back(it.id);
      auto& lines = s.primed ? example_lines : neighbor_lines;
      lines.push_back(it.label ? r.labelled(it.id, *it.label) : r.item(it.id));
    }
    if (sel.items.empty()) (s.primed ? audit.empty_demos : audit.empty_neighbors) = true;
  }

  if (code.demo) {
    const auto& d = *code.demo;
    const auto demos = d.scope == DemoScope::Global
                           ? selector.select_demos_global(d.strategy, options.budget.max_demos, seed, exclusions, anchor)
                           : selector.select_demos_class_aware(d.strategy, seed, exclusions, anchor);
    audit.demo_scope = d.scope;
    audit.demos = demos.nodes;
    audit.skipped_classes = demos.skipped_classes;
    for (const auto& demo : demos.nodes) example_lines.push_back(r.labelled(demo.id, demo.label));
    if (demos.empty()) audit.empty_demos = true;
  }

  Values values{{"target_text", r.anchor(anchor)}};
  const bool has_structure = !neighbor_lines.empty();
  const bool has_examples = !example_lines.empty();
  if (has_structure) {
    values["node_noun"] = g.node_noun();
    values["hop"] = std::to_string(code.structure->hop);
    values["neighbor_block"] = numbered(neighbor_lines);
  }
  if (has_examples) values["example_block"] = numbered(example_lines);
  return finish(std::move(bundle), pack, std::move(values), options, has_structure, has_examples);
}

PromptBundle render_lp(const Selector& selector, const MethodCode& code, NodePair pair, std::uint64_t seed,
                       const RenderOptions& options, const TemplatePack& pack) {
  const auto& g = selector.graph();
  g.check_node(pair.src);
  g.check_node(pair.dst);
  if (pair.src == pair.dst) throw RenderError("link-prediction pair must join two distinct nodes");
  if (code.primed()) {
    throw RenderError("method code " + format_code(code) +
                      " uses labelled neighbours as demonstrations, which link prediction does not support");
  }
  if (g.task_description_lp().empty()) {
    throw RenderError("dataset '" + g.name() + "' has no link-prediction task description");
  }

  PromptBundle bundle;
  bundle.code = code;
  bundle.system_text = g.task_description_lp();
  auto& audit = bundle.audit;
  audit.task = Task::LinkPrediction;
  audit.code = format_code(code);
  audit.pair = pair;

  Renderer r(g, options, audit);
  std::vector<std::string> neighbor_lines;
  std::vector<std::string> example_lines;

  if (code.structure) {
    const auto& s = *code.structure;
    const auto sel =
        selector.select_neighbors(pair.src, s.hop, s.strategy, options.budget.max_neighbors, seed, false);
    audit.hop = s.hop;
    audit.neighbor_pool = sel.pool_size;
    audit.neighbors = sel.items;
    for (const auto& it : sel.items) neighbor_lines.push_back(r.item(it.id));
    if (sel.items.empty()) audit.empty_neighbors = true;
  }

  if (code.demo) {
    const auto& d = *code.demo;
    const auto demos = selector.select_edge_demos(d.strategy, options.budget.max_demos, seed,
                                                  d.scope == DemoScope::ClassAware, pair);
    audit.demo_scope = d.scope;
    audit.pair_demos = demos.pairs;
    audit.skipped_classes = demos.skipped_classes;
    for (const auto& demo : demos.pairs) {
      example_lines.push_back(r.item(demo.pair.src) + " " + r.item(demo.pair.dst) +
                              ", Connected: " + (demo.connected ? "Yes" : "No"));
    }
    if (demos.empty()) audit.empty_demos = true;
  }

  Values values{{"target_text", r.anchor(pair.src)}, {"target_text_2", r.anchor(pair.dst)}};
  const bool has_structure = !neighbor_lines.empty();
  const bool has_examples = !example_lines.empty();
  if (has_structure) {
    values["node_noun"] = g.node_noun();
    values["hop"] = std::to_string(code.structure->hop);
    values["neighbor_block"] = numbered(neighbor_lines);
  }
  if (has_examples) values["example_block"] = numbered(example_lines);
  return finish(std::move(bundle), pack, std::move(values), options, has_structure, has_examples);
}

std::string bundle_to_json(const PromptBundle& bundle, const TextAttributedGraph& g, int indent) {
  using json = nlohmann::ordered_json;
  const auto& a = bundle.audit;
  json audit;
  audit["task"] = to_string(a.task);
  audit["code"] = a.code;
  if (a.anchor) audit["anchor"] = *a.anchor;
  if (a.pair) audit["pair"] = {a.pair->src, a.pair->dst};
  audit["template"] = variant_name(a.variant);
  audit["cot"] = a.cot;
  if (a.hop) {
    json neighbors = json::array();
    for (const auto& n : a.neighbors) {
      json item{{"id", n.id}};
      if (n.label) item["label"] = g.label_name(*n.label);
      neighbors.push_back(std::move(item));
    }
    audit["hop"] = a.hop;
    audit["neighbors_labeled"] = a.neighbors_labeled;
    audit["neighbor_pool"] = a.neighbor_pool;
    audit["neighbors"] = std::move(neighbors);
  }
  if (a.demo_scope) {
    json demos = json::array();
    for (const auto& d : a.demos) demos.push_back({{"id", d.id}, {"label", g.label_name(d.label)}});
    for (const auto& d : a.pair_demos) {
      demos.push_back({{"src", d.pair.src}, {"dst", d.pair.dst}, {"connected", d.connected}});
    }
    audit["demo_scope"] = to_string(*a.demo_scope);
    audit["demos"] = std::move(demos);
    audit["skipped_classes"] = a.skipped_classes;
  }
  audit["empty_neighbors"] = a.empty_neighbors;
  audit["empty_demos"] = a.empty_demos;
  audit["truncated_fields"] = a.truncated_fields;
  audit["digest"] = a.digest;

  json doc;
  doc["system"] = bundle.system_text;
  doc["user"] = bundle.user_text;
  doc["audit"] = std::move(audit);
  return doc.dump(indent);
}

}  // namespace gicl
