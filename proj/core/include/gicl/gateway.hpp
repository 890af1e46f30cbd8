#pragma once

#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gicl/graph.hpp"
#include "gicl/prompt.hpp"

namespace gicl {

enum class BackendKind : std::uint8_t { Http, Mock };

inline constexpr const char* kApiKeyEnv = "GICL_API_KEY";

struct BackendConfig {
  BackendKind kind = BackendKind::Mock;
  std::string endpoint_url;  // e.g. http://127.0.0.1:8000/v1
  std::string model_name = "mock";
  double temperature = 0.0;
  std::size_t max_output_tokens = 512;
  std::chrono::milliseconds timeout{60'000};
  std::size_t max_retries = 3;
  /// Wait before retry i is retry_backoff[min(i, size-1)].
  std::vector<std::chrono::milliseconds> retry_backoff{std::chrono::milliseconds(1000),
                                                       std::chrono::milliseconds(2000),
                                                       std::chrono::milliseconds(4000)};
  std::size_t max_in_flight = 8;
  /// Artificial per-call latency for the mock backend.
  std::chrono::milliseconds mock_delay{0};

  /// Throws std::invalid_argument on negative temperature, an empty HTTP
  /// endpoint or a zero in-flight ceiling.
  void validate() const;
};

struct RawResponse {
  std::string text;
  std::chrono::milliseconds latency{0};
  std::size_t attempt_count = 0;
  std::string backend_id;
};

class CompletionError : public std::runtime_error {
 public:
  enum class Kind { RetriesExhausted, NonRetriableStatus, MalformedBody, MissingCredential };

  CompletionError(Kind kind, const std::string& what, int http_status = 0, std::size_t attempts = 0)
      : std::runtime_error(what), kind_(kind), http_status_(http_status), attempts_(attempts) {}

  Kind kind() const noexcept { return kind_; }
  int http_status() const noexcept { return http_status_; }
  std::size_t attempts() const noexcept { return attempts_; }

 private:
  Kind kind_;
  int http_status_;
  std::size_t attempts_;
};

std::string_view to_string(CompletionError::Kind k) noexcept;

/// Chat-completions request body with fixed field order:
/// model, messages[system, user], temperature, max_tokens.
std::string chat_request_body(const BackendConfig& cfg, const PromptBundle& bundle);

/// `choices[0].message.content`; CompletionError(MalformedBody) otherwise.
std::string parse_chat_response(std::string_view body);

/// Deterministic stand-in for an LLM. Node classification answers with the
/// plurality label of the labelled material in the audit; link prediction
/// compares the anchor edge against the connected and disconnected demo
/// centroids.
RawResponse mock_complete(const PromptBundle& bundle, const TextAttributedGraph& g);

/// Shareable backend handle. `complete` is thread-safe and holds at most
/// `max_in_flight` requests open at once.
class Gateway {
 public:
  /// Throws CompletionError(MissingCredential) for HTTP backends without
  /// GICL_API_KEY in the environment.
  Gateway(BackendConfig cfg, const TextAttributedGraph& g);
  ~Gateway();
  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  RawResponse complete(const PromptBundle& bundle);

  const BackendConfig& config() const noexcept { return cfg_; }
  std::string backend_id() const;

 private:
  RawResponse complete_http(const PromptBundle& bundle);

  struct Limiter;
  BackendConfig cfg_;
  const TextAttributedGraph* g_;
  std::string api_key_;
  std::unique_ptr<Limiter> limiter_;
};

/// One-shot convenience wrapper around Gateway.
RawResponse complete(const BackendConfig& cfg, const PromptBundle& bundle, const TextAttributedGraph& g);

}  // namespace gicl
