#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gicl/selection.hpp"

namespace gicl {

/// Structure-aware part of a code: neighbours at `hop`, chosen by
/// `strategy`. Primed neighbours carry labels and act as demonstrations.
struct StructureSpec {
  int hop = 1;
  Strategy strategy = Strategy::Random;
  bool primed = false;

  friend bool operator==(const StructureSpec&, const StructureSpec&) = default;
};

struct DemoSpec {
  DemoScope scope = DemoScope::Global;
  Strategy strategy = Strategy::Random;

  friend bool operator==(const DemoSpec&, const DemoSpec&) = default;
};

/// One of the 55 prompt configurations, written `(XX | [12]'?[RPS])(XX | [GC][RPS])`.
struct MethodCode {
  std::optional<StructureSpec> structure;
  std::optional<DemoSpec> demo;

  bool primed() const noexcept { return structure && structure->primed; }
  bool few_shot() const noexcept { return demo.has_value() || primed(); }

  friend bool operator==(const MethodCode&, const MethodCode&) = default;
};

class CodeError : public std::invalid_argument {
 public:
  enum class Kind {
    Empty,
    BadHop,
    UnknownStrategy,
    UnknownScope,
    Truncated,
    TrailingCharacters,
    PrimedWithDemos,
  };

  CodeError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

MethodCode parse_code(std::string_view code);
std::string format_code(const MethodCode& code);

/// All 55 codes: the seven structure options times the seven demo options,
/// then the six primed structures paired with no demos.
std::vector<MethodCode> enumerate_codes();

}  // namespace gicl
