#include "gicl/extract.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace gicl {

namespace {

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool is_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string lowered(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

// Earliest occurrence of `needle` in `hay` that is not glued to a
// neighbouring word character on an alphanumeric edge.
std::size_t find_bounded(std::string_view hay, std::string_view needle) {
  if (needle.empty()) return std::string_view::npos;
  for (auto pos = hay.find(needle); pos != std::string_view::npos; pos = hay.find(needle, pos + 1)) {
    const auto end = pos + needle.size();
    const bool left_ok = !is_word(needle.front()) || pos == 0 || !is_word(hay[pos - 1]);
    const bool right_ok = !is_word(needle.back()) || end == hay.size() || !is_word(hay[end]);
    if (left_ok && right_ok) return pos;
  }
  return std::string_view::npos;
}

bool arxiv_style(std::span<const std::string> vocab) {
  return !vocab.empty() && std::all_of(vocab.begin(), vocab.end(), [](const std::string& l) {
           return l.size() >= 5 && lower(l[0]) == 'c' && lower(l[1]) == 's' && l[2] == '.' &&
                  std::isalpha(static_cast<unsigned char>(l[3])) && std::isalpha(static_cast<unsigned char>(l[4])) &&
                  (l.size() == 5 || !is_word(l[5]));
         });
}

}  // namespace

std::optional<LabelId> extract_class_label(std::string_view raw, std::span<const std::string> vocab) {
  const auto text = lowered(raw);

  struct Candidate {
    std::size_t length;
    std::size_t pos;
    LabelId label;
  };
  std::optional<Candidate> best;
  auto offer = [&](const Candidate& c) {
    if (!best || c.length > best->length || (c.length == best->length && c.pos < best->pos) ||
        (c.length == best->length && c.pos == best->pos && c.label < best->label)) {
      best = c;
    }
  };

  for (LabelId i = 0; i < vocab.size(); ++i) {
    const auto pos = find_bounded(text, lowered(vocab[i]));
    if (pos != std::string_view::npos) offer({vocab[i].size(), pos, i});
  }

  if (arxiv_style(vocab)) {
    for (LabelId i = 0; i < vocab.size(); ++i) {
      const auto pos = find_bounded(text, lowered(std::string_view(vocab[i]).substr(0, 5)));
      if (pos != std::string_view::npos) offer({vocab[i].size(), pos, i});
    }
  }

  if (!best) return std::nullopt;
  return best->label;
}

std::optional<bool> extract_link(std::string_view raw) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c != '0' && c != '1') continue;
    const bool left_ok = i == 0 || (!is_word(raw[i - 1]) && raw[i - 1] != '.');
    const bool right_ok =
        i + 1 == raw.size() ||
        (!is_word(raw[i + 1]) &&
         !(raw[i + 1] == '.' && i + 2 < raw.size() && std::isdigit(static_cast<unsigned char>(raw[i + 2]))));
    if (left_ok && right_ok) return c == '1';
  }
  const auto text = lowered(raw);
  const auto yes = find_bounded(text, "yes");
  const auto no = find_bounded(text, "no");
  if (yes == std::string::npos && no == std::string::npos) return std::nullopt;
  return yes < no;
}

std::optional<std::string> extract_label(std::string_view raw, std::span<const std::string> vocab, Task task) {
  if (task == Task::LinkPrediction) {
    const auto link = extract_link(raw);
    if (!link) return std::nullopt;
    return std::string(*link ? "1" : "0");
  }
  const auto label = extract_class_label(raw, vocab);
  if (!label) return std::nullopt;
  return vocab[*label];
}

}  // namespace gicl
