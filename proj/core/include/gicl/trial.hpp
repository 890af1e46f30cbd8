#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "gicl/prompt.hpp"

namespace gicl {

/// One (code, subject) evaluation. `predicted` and `gold` hold a vocabulary
/// string for node classification and "0"/"1" for link prediction.
struct TrialResult {
  std::string trial_id;  // "<code>:<subject>"
  std::string code;
  std::string subject;  // node id, or "src-dst" for a pair
  std::string prompt_digest;
  std::string raw_text;
  std::optional<std::string> predicted;
  std::string gold;
  bool correct = false;
  bool unparsed = false;
  std::optional<std::string> error;
  std::int64_t latency_ms = 0;
};

std::string make_trial_id(std::string_view code, std::string_view subject);

/// Single-line JSON with a fixed key order. Link-prediction verdicts are
/// written as integers.
std::string trial_to_json_line(const TrialResult& t, Task task);

/// Throws std::invalid_argument on anything that is not a complete record.
TrialResult trial_from_json_line(std::string_view line);

}  // namespace gicl
