#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gicl {

enum class TemplateVariant {
  NcZero,
  NcZeroStruct,
  NcFew,
  NcFewStruct,
  LpZero,
  LpZeroStruct,
  LpFew,
  LpFewStruct,
};

inline constexpr std::array<TemplateVariant, 8> kAllVariants = {
    TemplateVariant::NcZero, TemplateVariant::NcZeroStruct, TemplateVariant::NcFew,
    TemplateVariant::NcFewStruct, TemplateVariant::LpZero, TemplateVariant::LpZeroStruct,
    TemplateVariant::LpFew, TemplateVariant::LpFewStruct,
};

/// File stem used on disk, e.g. "nc_few_struct".
std::string_view variant_name(TemplateVariant v) noexcept;

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// User-content templates, one per (task, zero/few-shot, with/without
/// structure) combination. Placeholders are written `{name}`; each variant
/// must use exactly its own placeholder set.
class TemplatePack {
 public:
  /// The built-in pack.
  TemplatePack();

  /// Reads `<variant>.txt` for all eight variants. A single trailing newline
  /// per file is dropped. Throws TemplateError on a missing file or a
  /// placeholder mismatch.
  static TemplatePack load(const std::filesystem::path& dir);

  /// Writes every variant as `<variant>.txt` (with a trailing newline).
  void save(const std::filesystem::path& dir) const;

  const std::string& get(TemplateVariant v) const;
  /// Throws TemplateError if `text` does not use exactly the variant's placeholders.
  void set(TemplateVariant v, std::string text);

 private:
  std::array<std::string, kAllVariants.size()> texts_;
};

/// Placeholder names the variant must contain.
std::vector<std::string> required_placeholders(TemplateVariant v);

/// Placeholder names appearing in `text`, sorted and unique.
std::vector<std::string> placeholders_in(std::string_view text);

/// Single left-to-right pass: each `{name}` with a value in `values` is
/// replaced; substituted text is never rescanned.
std::string substitute(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values);

}  // namespace gicl
