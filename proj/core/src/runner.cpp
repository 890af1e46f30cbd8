#include "gicl/runner.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "gicl/extract.hpp"
#include "json.hpp"

namespace gicl {

namespace fs = std::filesystem;

namespace {

using ojson = nlohmann::ordered_json;

struct TrialTask {
  std::size_t code_index;
  std::size_t subject_index;
  std::string trial_id;
};

// Reads the longest valid prefix of trials.jsonl and cuts off anything after
// it (a torn final line left by a crash).
std::vector<TrialResult> recover_trials(const fs::path& path) {
  std::vector<TrialResult> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto content = std::move(ss).str();
  in.close();

  std::size_t valid_end = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    if (nl == std::string::npos) break;
    const std::string_view line(content.data() + pos, nl - pos);
    if (!line.empty()) {
      try {
        out.push_back(trial_from_json_line(line));
      } catch (const std::invalid_argument&) {
        break;
      }
    }
    pos = nl + 1;
    valid_end = pos;
  }
  if (valid_end != content.size()) fs::resize_file(path, valid_end);
  return out;
}

// Writes results in queue order no matter which worker finishes first, so
// the file is identical at every concurrency level and is always a prefix of
// the full run.
class OrderedAppender {
 public:
  OrderedAppender(const fs::path& path, Task task) : out_(path, std::ios::binary | std::ios::app), task_(task) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for appending");
  }

  void submit(std::size_t index, TrialResult result) {
    std::lock_guard lock(mu_);
    pending_.emplace(index, std::move(result));
    while (!pending_.empty() && pending_.begin()->first == next_) {
      auto node = pending_.extract(pending_.begin());
      out_ << trial_to_json_line(node.mapped(), task_) << '\n';
      out_.flush();
      written_.push_back(std::move(node.mapped()));
      ++next_;
    }
  }

  std::vector<TrialResult> take_written() { return std::move(written_); }

 private:
  std::mutex mu_;
  std::ofstream out_;
  Task task_;
  std::map<std::size_t, TrialResult> pending_;
  std::size_t next_ = 0;
  std::vector<TrialResult> written_;
};

std::string error_text(std::string_view kind, const std::exception& e) {
  return std::string(kind) + ": " + e.what();
}

ojson plan_json(const RunPlan& plan, const RenderOptions& render, std::size_t subjects) {
  ojson codes = ojson::array();
  for (const auto& c : plan.codes) codes.push_back(format_code(c));
  ojson backend;
  backend["kind"] = plan.backend.kind == BackendKind::Mock ? "mock" : "http";
  backend["model"] = plan.backend.model_name;
  if (plan.backend.kind == BackendKind::Http) backend["endpoint"] = plan.backend.endpoint_url;
  backend["temperature"] = plan.backend.temperature;
  backend["max_tokens"] = plan.backend.max_output_tokens;

  ojson j;
  j["task"] = to_string(plan.task);
  j["codes"] = std::move(codes);
  j["seed"] = plan.seed;
  j["cot"] = render.cot;
  if (render.cot) j["cot_sentence"] = render.cot_sentence;
  j["budget"] = {{"max_neighbors", render.budget.max_neighbors}, {"max_demos", render.budget.max_demos}};
  j["truncation"] = {{"anchor_chars", render.max_anchor_chars}, {"item_chars", render.max_item_chars}};
  j["pagerank"] = {{"damping", plan.pagerank.damping},
                   {"tolerance", plan.pagerank.tolerance},
                   {"max_iterations", plan.pagerank.max_iterations}};
  j["backend"] = std::move(backend);
  j["concurrency"] = plan.concurrency;
  j["limit"] = plan.limit ? ojson(*plan.limit) : ojson(nullptr);
  j["subjects"] = subjects;
  return j;
}

void write_atomically(const fs::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

}  // namespace

void RunPlan::validate() const {
  if (codes.empty()) throw std::invalid_argument("run plan has no method codes");
  if (concurrency == 0) throw std::invalid_argument("concurrency must be at least 1");
  if (output_dir.empty()) throw std::invalid_argument("run plan has no output directory");
  if (task == Task::LinkPrediction) {
    for (const auto& c : codes) {
      if (c.primed()) {
        throw std::invalid_argument("method code " + format_code(c) + " is not valid for link prediction");
      }
    }
  }
  std::set<std::string> seen;
  for (const auto& c : codes) {
    if (!seen.insert(format_code(c)).second) {
      throw std::invalid_argument("method code " + format_code(c) + " listed twice");
    }
  }
  backend.validate();
  pagerank.validate();
}

RenderOptions effective_render_options(const RunPlan& plan) {
  RenderOptions r = plan.render;
  const auto cap = plan.task == Task::NodeClassification ? SelectionBudget::node_classification()
                                                         : SelectionBudget::link_prediction();
  r.budget.max_neighbors = std::min(r.budget.max_neighbors, cap.max_neighbors);
  r.budget.max_demos = std::min(r.budget.max_demos, cap.max_demos);
  return r;
}

std::vector<Subject> plan_subjects(const TextAttributedGraph& g, const RunPlan& plan) {
  std::vector<Subject> out;
  if (plan.task == Task::NodeClassification) {
    std::vector<NodeId> ids;
    if (plan.trial_ids.empty()) {
      for (const NodeId id : split_members(g, Split::Test)) {
        if (g.label(id)) ids.push_back(id);
      }
    } else {
      for (const auto raw : plan.trial_ids) {
        if (raw >= g.node_count()) throw std::out_of_range("trial node id " + std::to_string(raw) + " out of range");
        const auto id = static_cast<NodeId>(raw);
        if (!g.label(id)) throw std::invalid_argument("trial node " + std::to_string(id) + " has no gold label");
        ids.push_back(id);
      }
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
    for (const NodeId id : ids) {
      out.push_back({std::to_string(id), id, std::nullopt, g.label_name(*g.label(id))});
    }
  } else {
    const auto pairs = g.pairs();
    std::vector<std::size_t> idx;
    if (plan.trial_ids.empty()) {
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i].split == Split::Test) idx.push_back(i);
      }
    } else {
      for (const auto raw : plan.trial_ids) {
        if (raw >= pairs.size()) throw std::out_of_range("trial pair index " + std::to_string(raw) + " out of range");
        idx.push_back(static_cast<std::size_t>(raw));
      }
      std::sort(idx.begin(), idx.end());
      idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    }
    for (const auto i : idx) {
      const auto& p = pairs[i];
      out.push_back({std::to_string(p.pair.src) + "-" + std::to_string(p.pair.dst), std::nullopt, p.pair,
                     p.connected ? "1" : "0"});
    }
  }
  if (plan.limit && out.size() > *plan.limit) out.resize(*plan.limit);
  return out;
}

std::pair<std::optional<std::string>, std::optional<std::string>> best_two(
    const std::map<std::string, CodeStats>& per_code) {
  std::vector<std::pair<std::string, double>> ranked;
  for (const auto& [code, stats] : per_code) {
    if (stats.n > 0) ranked.emplace_back(code, stats.accuracy);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::pair<std::optional<std::string>, std::optional<std::string>> out;
  if (!ranked.empty()) out.first = ranked[0].first;
  if (ranked.size() > 1) out.second = ranked[1].first;
  return out;
}

RunOutcome run(const TextAttributedGraph& g, const RunPlan& plan, const std::string& dataset_digest) {
  plan.validate();
  const auto subjects = plan_subjects(g, plan);
  if (plan.task == Task::LinkPrediction) {
    for (const auto& c : plan.codes) {
      if (c.demo) {
        g.pairs();  // throws DatasetError when pairs.jsonl is absent
        break;
      }
    }
  }

  fs::create_directories(plan.output_dir);
  const auto trials_path = plan.output_dir / kTrialsFile;
  const auto summary_path = plan.output_dir / kSummaryFile;
  if (!plan.resume && fs::exists(trials_path) && fs::file_size(trials_path) > 0) {
    throw std::invalid_argument(trials_path.string() +
                                " already exists; pass --resume to continue it or choose another output directory");
  }

  Gateway gateway(plan.backend, g);
  const Selector selector(g, plan.pagerank);
  const auto render = effective_render_options(plan);

  std::vector<std::string> code_strings;
  for (const auto& c : plan.codes) code_strings.push_back(format_code(c));

  std::vector<TrialResult> existing = plan.resume ? recover_trials(trials_path) : std::vector<TrialResult>{};
  std::set<std::string> done;
  for (const auto& t : existing) done.insert(t.trial_id);

  std::vector<TrialTask> queue;
  std::size_t total = 0;
  for (std::size_t ci = 0; ci < plan.codes.size(); ++ci) {
    for (std::size_t si = 0; si < subjects.size(); ++si) {
      ++total;
      auto id = make_trial_id(code_strings[ci], subjects[si].key);
      if (done.count(id)) continue;
      queue.push_back({ci, si, std::move(id)});
    }
  }

  const auto vocab = std::span<const std::string>(g.label_vocabulary());
  auto execute = [&](const TrialTask& task) {
    const auto& subject = subjects[task.subject_index];
    const auto& code = plan.codes[task.code_index];
    TrialResult r;
    r.trial_id = task.trial_id;
    r.code = code_strings[task.code_index];
    r.subject = subject.key;
    r.gold = subject.gold;

    PromptBundle bundle;
    try {
      bundle = plan.task == Task::NodeClassification
                   ? render_nc(selector, code, *subject.node, plan.seed, render, plan.templates)
                   : render_lp(selector, code, *subject.pair, plan.seed, render, plan.templates);
    } catch (const std::exception& e) {
      r.error = error_text("render_error", e);
      return r;
    }
    r.prompt_digest = bundle.audit.digest;

    try {
      const auto resp = gateway.complete(bundle);
      r.raw_text = resp.text;
      r.latency_ms = resp.latency.count();
    } catch (const CompletionError& e) {
      r.error = error_text(to_string(e.kind()), e);
      return r;
    } catch (const std::exception& e) {
      r.error = error_text("backend_error", e);
      return r;
    }

    r.predicted = extract_label(r.raw_text, vocab, plan.task);
    r.unparsed = !r.predicted.has_value();
    r.correct = r.predicted && *r.predicted == r.gold;
    return r;
  };

  OrderedAppender appender(trials_path, plan.task);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < queue.size(); i = next.fetch_add(1)) {
      TrialResult r;
      try {
        r = execute(queue[i]);
      } catch (const std::exception& e) {
        r.trial_id = queue[i].trial_id;
        r.code = code_strings[queue[i].code_index];
        r.subject = subjects[queue[i].subject_index].key;
        r.gold = subjects[queue[i].subject_index].gold;
        r.error = error_text("internal_error", e);
      }
      appender.submit(i, std::move(r));
    }
  };
  {
    const auto workers = std::min(plan.concurrency, std::max<std::size_t>(queue.size(), 1));
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  RunOutcome outcome;
  outcome.trials_total = total;
  outcome.trials_resumed = total - queue.size();
  auto fresh = appender.take_written();
  outcome.trials_run = fresh.size();

  std::set<std::string> planned;
  for (std::size_t ci = 0; ci < plan.codes.size(); ++ci) {
    outcome.per_code[code_strings[ci]];
    for (const auto& s : subjects) planned.insert(make_trial_id(code_strings[ci], s.key));
  }
  auto tally = [&](const TrialResult& t) {
    if (!planned.count(t.trial_id)) return;
    auto& s = outcome.per_code[t.code];
    ++s.n;
    s.correct += t.correct ? 1 : 0;
    s.unparsed += t.unparsed ? 1 : 0;
    if (t.error) {
      ++s.errors;
      if (t.error->rfind(to_string(CompletionError::Kind::RetriesExhausted), 0) == 0) ++outcome.backend_exhausted;
    }
  };
  for (const auto& t : existing) tally(t);
  for (const auto& t : fresh) tally(t);
  for (auto& [code, s] : outcome.per_code) {
    s.accuracy = s.n ? 100.0 * static_cast<double>(s.correct) / static_cast<double>(s.n) : 0.0;
  }
  std::tie(outcome.s1, outcome.s2) = best_two(outcome.per_code);

  ojson summary;
  ojson per_code;
  for (const auto& code : code_strings) {
    const auto& s = outcome.per_code[code];
    per_code[code] = {{"accuracy", s.accuracy}, {"n", s.n}, {"unparsed", s.unparsed}, {"errors", s.errors}};
  }
  summary["per_code"] = std::move(per_code);
  summary["s1"] = outcome.s1 ? ojson(*outcome.s1) : ojson(nullptr);
  summary["s2"] = outcome.s2 ? ojson(*outcome.s2) : ojson(nullptr);
  summary["plan"] = plan_json(plan, render, subjects.size());
  summary["dataset_digest"] = dataset_digest;
  write_atomically(summary_path, summary.dump(2) + "\n");
  return outcome;
}

}  // namespace gicl
