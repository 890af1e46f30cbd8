#include "gicl/gateway.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <semaphore>
#include <thread>

#include "gicl/analytics.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"

namespace gicl {

namespace {

using Clock = std::chrono::steady_clock;

std::chrono::milliseconds since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
}

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // .../chat/completions
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("endpoint URL must start with http:// or https://: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint ep;
  ep.origin = url.substr(0, path_start);
  std::string base = path_start == std::string::npos ? std::string() : url.substr(path_start);
  while (!base.empty() && base.back() == '/') base.pop_back();
  ep.path = base + "/chat/completions";
  return ep;
}

bool retriable_status(int status) { return status == 429 || (status >= 500 && status <= 599); }

std::string mock_nc(const PromptBundle& bundle, const TextAttributedGraph& g) {
  const auto& audit = bundle.audit;
  std::vector<std::size_t> votes(g.label_vocabulary().size(), 0);
  for (const auto& d : audit.demos) ++votes.at(d.label);
  for (const auto& n : audit.neighbors) {
    if (n.label) ++votes.at(*n.label);
  }
  // max_element keeps the first maximum, i.e. vocabulary order on ties.
  const auto best = static_cast<LabelId>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  return "The " + g.node_noun() + " belongs to the " + g.label_name(best) + " category.";
}

std::string mock_lp(const PromptBundle& bundle, const TextAttributedGraph& g) {
  const auto& audit = bundle.audit;
  if (!audit.pair || audit.pair_demos.empty()) return "0";
  const auto anchor = edge_embedding(g, *audit.pair);
  std::vector<double> pos(g.dim(), 0.0);
  std::vector<double> neg(g.dim(), 0.0);
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  for (const auto& d : audit.pair_demos) {
    const auto e = edge_embedding(g, d.pair);
    auto& acc = d.connected ? pos : neg;
    for (std::size_t i = 0; i < e.size(); ++i) acc[i] += e[i];
    ++(d.connected ? n_pos : n_neg);
  }
  constexpr double kAbsent = -std::numeric_limits<double>::infinity();
  // Centroid scaling does not change cosine, so the sums are compared directly.
  const double sim_pos = n_pos ? cosine(std::span<const double>(anchor), std::span<const double>(pos)).value : kAbsent;
  const double sim_neg = n_neg ? cosine(std::span<const double>(anchor), std::span<const double>(neg)).value : kAbsent;
  return sim_pos > sim_neg ? "1" : "0";
}

}  // namespace

std::string_view to_string(CompletionError::Kind k) noexcept {
  switch (k) {
    case CompletionError::Kind::RetriesExhausted: return "retries_exhausted";
    case CompletionError::Kind::NonRetriableStatus: return "non_retriable_status";
    case CompletionError::Kind::MalformedBody: return "malformed_body";
    case CompletionError::Kind::MissingCredential: return "missing_credential";
  }
  return "unknown";
}

void BackendConfig::validate() const {
  if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be non-negative");
  if (max_in_flight == 0) throw std::invalid_argument("in-flight ceiling must be at least 1");
  if (kind == BackendKind::Http) {
    if (endpoint_url.empty()) throw std::invalid_argument("HTTP backend needs an endpoint URL");
    split_endpoint(endpoint_url);
    if (model_name.empty()) throw std::invalid_argument("HTTP backend needs a model name");
  }
}

std::string chat_request_body(const BackendConfig& cfg, const PromptBundle& bundle) {
  nlohmann::ordered_json body;
  body["model"] = cfg.model_name;
  body["messages"] = nlohmann::ordered_json::array({
      {{"role", "system"}, {"content", bundle.system_text}},
      {{"role", "user"}, {"content", bundle.user_text}},
  });
  body["temperature"] = cfg.temperature;
  body["max_tokens"] = cfg.max_output_tokens;
  return body.dump();
}

std::string parse_chat_response(std::string_view body) {
  using Kind = CompletionError::Kind;
  const auto doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw CompletionError(Kind::MalformedBody, "response is not a JSON object");
  const auto choices = doc.find("choices");
  if (choices == doc.end() || !choices->is_array() || choices->empty()) {
    throw CompletionError(Kind::MalformedBody, "response has no choices");
  }
  const auto& first = (*choices)[0];
  if (!first.is_object() || !first.contains("message") || !first["message"].is_object()) {
    throw CompletionError(Kind::MalformedBody, "first choice has no message");
  }
  const auto& message = first["message"];
  const auto content = message.find("content");
  if (content == message.end() || !content->is_string()) {
    throw CompletionError(Kind::MalformedBody, "first choice message has no string content");
  }
  return content->get<std::string>();
}

RawResponse mock_complete(const PromptBundle& bundle, const TextAttributedGraph& g) {
  const auto start = Clock::now();
  RawResponse r;
  r.text = bundle.audit.task == Task::NodeClassification ? mock_nc(bundle, g) : mock_lp(bundle, g);
  r.attempt_count = 1;
  r.backend_id = "mock";
  r.latency = since(start);
  return r;
}

struct Gateway::Limiter {
  explicit Limiter(std::size_t n) : slots(static_cast<std::ptrdiff_t>(n)) {}
  std::counting_semaphore<4096> slots;
};

Gateway::Gateway(BackendConfig cfg, const TextAttributedGraph& g) : cfg_(std::move(cfg)), g_(&g) {
  cfg_.validate();
  cfg_.max_in_flight = std::min<std::size_t>(cfg_.max_in_flight, 4096);
  limiter_ = std::make_unique<Limiter>(cfg_.max_in_flight);
  if (cfg_.kind == BackendKind::Http) {
    const char* key = std::getenv(kApiKeyEnv);
    if (key == nullptr || *key == '\0') {
      throw CompletionError(CompletionError::Kind::MissingCredential,
                            std::string("HTTP backend requires the ") + kApiKeyEnv + " environment variable");
    }
    api_key_ = key;
  }
}

Gateway::~Gateway() = default;

std::string Gateway::backend_id() const {
  return cfg_.kind == BackendKind::Mock ? "mock" : "http:" + cfg_.model_name;
}

RawResponse Gateway::complete(const PromptBundle& bundle) {
  if (cfg_.kind == BackendKind::Mock) {
    if (cfg_.mock_delay.count() > 0) std::this_thread::sleep_for(cfg_.mock_delay);
    return mock_complete(bundle, *g_);
  }
  limiter_->slots.acquire();
  struct Release {
    Limiter* l;
    ~Release() { l->slots.release(); }
  } release{limiter_.get()};
  return complete_http(bundle);
}

RawResponse Gateway::complete_http(const PromptBundle& bundle) {
  using Kind = CompletionError::Kind;
  const auto ep = split_endpoint(cfg_.endpoint_url);
  const auto body = chat_request_body(cfg_, bundle);
  const auto start = Clock::now();
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(cfg_.timeout - seconds);

  httplib::Client client(ep.origin);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  const httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};

  std::string last_failure;
  int last_status = 0;
  const std::size_t attempts_allowed = cfg_.max_retries + 1;
  for (std::size_t attempt = 1; attempt <= attempts_allowed; ++attempt) {
    if (attempt > 1 && !cfg_.retry_backoff.empty()) {
      const auto idx = std::min(attempt - 2, cfg_.retry_backoff.size() - 1);
      std::this_thread::sleep_for(cfg_.retry_backoff[idx]);
    }
    const auto res = client.Post(ep.path, headers, body, "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      last_status = 0;
      continue;
    }
    if (res->status >= 200 && res->status < 300) {
      RawResponse r;
      try {
        r.text = parse_chat_response(res->body);
      } catch (const CompletionError& e) {
        throw CompletionError(Kind::MalformedBody, e.what(), res->status, attempt);
      }
      r.attempt_count = attempt;
      r.backend_id = backend_id();
      r.latency = since(start);
      return r;
    }
    if (!retriable_status(res->status)) {
      throw CompletionError(Kind::NonRetriableStatus, "HTTP status " + std::to_string(res->status), res->status,
                            attempt);
    }
    last_failure = "HTTP status " + std::to_string(res->status);
    last_status = res->status;
  }
  throw CompletionError(Kind::RetriesExhausted,
                        "gave up after " + std::to_string(attempts_allowed) + " attempts (" + last_failure + ")",
                        last_status, attempts_allowed);
}

RawResponse complete(const BackendConfig& cfg, const PromptBundle& bundle, const TextAttributedGraph& g) {
  Gateway gw(cfg, g);
  return gw.complete(bundle);
}

}  // namespace gicl
