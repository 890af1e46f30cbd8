#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "gicl/graph.hpp"
#include "gicl/prompt.hpp"

namespace gicl {

/// Picks the class label a free-form completion names.
///
/// Vocabulary strings are matched case-insensitively and must not sit inside
/// a longer word. The longest matching label wins, then the earliest
/// occurrence, then vocabulary order. When every label looks like an arXiv
/// category ("cs.XX"), bare "cs.xx" mentions are also recognised. Returns
/// nullopt rather than guessing.
std::optional<LabelId> extract_class_label(std::string_view raw, std::span<const std::string> vocab);

/// First standalone 0/1 token; otherwise the first standalone yes/no word.
std::optional<bool> extract_link(std::string_view raw);

/// Task-dispatching form. Node classification yields the vocabulary string,
/// link prediction "0" or "1"; nullopt marks an unparsed completion.
std::optional<std::string> extract_label(std::string_view raw, std::span<const std::string> vocab, Task task);

}  // namespace gicl
