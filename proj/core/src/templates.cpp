#include "gicl/templates.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace gicl {

namespace {

constexpr std::string_view kNcZero =
    "Below I will provide you with target node information.{cot}\n"
    "Target node content: {target_text}.";

constexpr std::string_view kNcZeroStruct =
    "Below I will provide you with target node information and target node neighbor information. "
    "You need to use target node neighbor information to help you predict the category of target node.{cot}\n"
    "Target node content: {target_text}.\n"
    "It has following neighbor {node_noun}s at hop {hop}: {neighbor_block}.";

constexpr std::string_view kNcFew =
    "Below I will provide you with target node information and some other examples in order. "
    "You need to use examples to help you predict the category of target node.{cot}\n"
    "Target node content: {target_text}.\n"
    "I will give you some other examples to help you predict the category: {example_block}.";

constexpr std::string_view kNcFewStruct =
    "Below I will provide you with target node information, target node neighbor information and some "
    "other examples in order. You need to use target node neighbor information and some other examples "
    "to help you predict the category of target node.{cot}\n"
    "Target node content: {target_text}.\n"
    "It has following neighbor {node_noun}s at hop {hop}: {neighbor_block}.\n"
    "I will give you some other examples to help you predict the category: {example_block}.";

constexpr std::string_view kLpZero =
    "Below I will provide you with target 2 nodes information.{cot}\n"
    "The 2 target nodes content: {target_text} {target_text_2}";

constexpr std::string_view kLpZeroStruct =
    "Below I will provide you with target 2 nodes information and the first node's neighbor information "
    "in order. You need to use the first node's neighbor information to help you predict the link between "
    "the 2 target nodes.{cot}\n"
    "The 2 target nodes content: {target_text} {target_text_2}\n"
    "For the first node: It has following neighbor {node_noun}s at hop {hop}: {neighbor_block}.";

constexpr std::string_view kLpFew =
    "Below I will provide you with target 2 nodes information and some other examples of node pairs and "
    "connections in order. You need to use the other examples to help you predict the link between the 2 "
    "target nodes.{cot}\n"
    "The 2 target nodes content: {target_text} {target_text_2}.\n"
    "The following are the some other examples of node pairs and connections: {example_block}";

constexpr std::string_view kLpFewStruct =
    "Below I will provide you with target 2 nodes information, the first node's neighbor information and "
    "some other examples of node pairs and connections in order. You need to use the first node's neighbor "
    "information and other examples to help you predict the link between the 2 target nodes.{cot}\n"
    "The 2 target nodes content: {target_text} {target_text_2}.\n"
    "For the first node: It has following neighbor {node_noun}s at hop {hop}: {neighbor_block}.\n"
    "The following are the some other examples of node pairs and connections: {example_block}";

std::size_t index_of(TemplateVariant v) { return static_cast<std::size_t>(v); }

bool is_placeholder_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

// Returns the length of a `{name}` token starting at `pos`, or 0.
std::size_t placeholder_at(std::string_view text, std::size_t pos) {
  if (text[pos] != '{') return 0;
  std::size_t end = pos + 1;
  while (end < text.size() && is_placeholder_char(text[end])) ++end;
  if (end == pos + 1 || end >= text.size() || text[end] != '}') return 0;
  return end - pos + 1;
}

void check_placeholders(TemplateVariant v, std::string_view text) {
  const auto want = required_placeholders(v);
  const auto have = placeholders_in(text);
  if (want == have) return;
  std::ostringstream msg;
  msg << "template '" << variant_name(v) << "' must use placeholders {";
  for (std::size_t i = 0; i < want.size(); ++i) msg << (i ? ", " : "") << want[i];
  msg << "} but uses {";
  for (std::size_t i = 0; i < have.size(); ++i) msg << (i ? ", " : "") << have[i];
  msg << "}";
  throw TemplateError(msg.str());
}

}  // namespace

std::string_view variant_name(TemplateVariant v) noexcept {
  switch (v) {
    case TemplateVariant::NcZero: return "nc_zero";
    case TemplateVariant::NcZeroStruct: return "nc_zero_struct";
    case TemplateVariant::NcFew: return "nc_few";
    case TemplateVariant::NcFewStruct: return "nc_few_struct";
    case TemplateVariant::LpZero: return "lp_zero";
    case TemplateVariant::LpZeroStruct: return "lp_zero_struct";
    case TemplateVariant::LpFew: return "lp_few";
    case TemplateVariant::LpFewStruct: return "lp_few_struct";
  }
  return "unknown";
}

std::vector<std::string> required_placeholders(TemplateVariant v) {
  const bool lp = v == TemplateVariant::LpZero || v == TemplateVariant::LpZeroStruct ||
                  v == TemplateVariant::LpFew || v == TemplateVariant::LpFewStruct;
  const bool structure = v == TemplateVariant::NcZeroStruct || v == TemplateVariant::NcFewStruct ||
                         v == TemplateVariant::LpZeroStruct || v == TemplateVariant::LpFewStruct;
  const bool few = v == TemplateVariant::NcFew || v == TemplateVariant::NcFewStruct ||
                   v == TemplateVariant::LpFew || v == TemplateVariant::LpFewStruct;
  std::vector<std::string> out{"cot", "target_text"};
  if (lp) out.emplace_back("target_text_2");
  if (structure) {
    out.emplace_back("hop");
    out.emplace_back("neighbor_block");
    out.emplace_back("node_noun");
  }
  if (few) out.emplace_back("example_block");
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> placeholders_in(std::string_view text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (const auto len = placeholder_at(text, i)) {
      out.emplace_back(text.substr(i + 1, len - 2));
      i += len - 1;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string substitute(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values) {
  std::string out;
  out.reserve(tmpl.size());
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (const auto len = placeholder_at(tmpl, i)) {
      const auto it = values.find(tmpl.substr(i + 1, len - 2));
      if (it != values.end()) {
        out += it->second;
        i += len - 1;
        continue;
      }
    }
    out.push_back(tmpl[i]);
  }
  return out;
}

TemplatePack::TemplatePack() {
  texts_[index_of(TemplateVariant::NcZero)] = kNcZero;
  texts_[index_of(TemplateVariant::NcZeroStruct)] = kNcZeroStruct;
  texts_[index_of(TemplateVariant::NcFew)] = kNcFew;
  texts_[index_of(TemplateVariant::NcFewStruct)] = kNcFewStruct;
  texts_[index_of(TemplateVariant::LpZero)] = kLpZero;
  texts_[index_of(TemplateVariant::LpZeroStruct)] = kLpZeroStruct;
  texts_[index_of(TemplateVariant::LpFew)] = kLpFew;
  texts_[index_of(TemplateVariant::LpFewStruct)] = kLpFewStruct;
}

TemplatePack TemplatePack::load(const std::filesystem::path& dir) {
  TemplatePack pack;
  for (const auto v : kAllVariants) {
    const auto path = dir / (std::string(variant_name(v)) + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TemplateError("missing template file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    auto text = std::move(ss).str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    pack.set(v, std::move(text));
  }
  return pack;
}

void TemplatePack::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto v : kAllVariants) {
    const auto path = dir / (std::string(variant_name(v)) + ".txt");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw TemplateError("cannot write " + path.string());
    out << get(v) << '\n';
  }
}

const std::string& TemplatePack::get(TemplateVariant v) const { return texts_.at(index_of(v)); }

void TemplatePack::set(TemplateVariant v, std::string text) {
  check_placeholders(v, text);
  texts_.at(index_of(v)) = std::move(text);
}

}  // namespace gicl
