#include "gicl/trial.hpp"

#include <stdexcept>

#include "json.hpp"

namespace gicl {

namespace {

using ojson = nlohmann::ordered_json;

ojson verdict(const std::string& v, Task task) {
  if (task == Task::LinkPrediction && (v == "0" || v == "1")) return v == "1" ? 1 : 0;
  return v;
}

std::string read_verdict(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw std::invalid_argument(std::string("trial field '") + key + "' must be a string or integer");
}

}  // namespace

std::string make_trial_id(std::string_view code, std::string_view subject) {
  std::string id(code);
  id += ':';
  id += subject;
  return id;
}

std::string trial_to_json_line(const TrialResult& t, Task task) {
  ojson j;
  j["trial_id"] = t.trial_id;
  j["code"] = t.code;
  j["subject"] = t.subject;
  j["prompt_digest"] = t.prompt_digest;
  j["raw_text"] = t.raw_text;
  j["predicted"] = t.predicted ? verdict(*t.predicted, task) : ojson(nullptr);
  j["gold"] = verdict(t.gold, task);
  j["correct"] = t.correct;
  j["unparsed"] = t.unparsed;
  j["error"] = t.error ? ojson(*t.error) : ojson(nullptr);
  j["latency_ms"] = t.latency_ms;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

TrialResult trial_from_json_line(std::string_view line) {
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw std::invalid_argument("trial record is not a JSON object");
  try {
    TrialResult t;
    t.trial_id = j.at("trial_id").get<std::string>();
    t.code = j.at("code").get<std::string>();
    t.subject = j.at("subject").get<std::string>();
    t.prompt_digest = j.at("prompt_digest").get<std::string>();
    t.raw_text = j.at("raw_text").get<std::string>();
    if (!j.at("predicted").is_null()) t.predicted = read_verdict(j, "predicted");
    t.gold = read_verdict(j, "gold");
    t.correct = j.at("correct").get<bool>();
    t.unparsed = j.at("unparsed").get<bool>();
    if (!j.at("error").is_null()) t.error = j.at("error").get<std::string>();
    t.latency_ms = j.at("latency_ms").get<std::int64_t>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed trial record: ") + e.what());
  }
}

}  // namespace gicl
