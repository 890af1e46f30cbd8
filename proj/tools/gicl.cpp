// gicl: command-line front end for the graph in-context-learning benchmark.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 backend exhausted.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gicl/analytics.hpp"
#include "gicl/graph.hpp"
#include "gicl/method_code.hpp"
#include "gicl/prompt.hpp"
#include "gicl/report.hpp"
#include "gicl/runner.hpp"

namespace {

using namespace gicl;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBackend = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Task task_arg(const std::string& s) {
  if (auto t = parse_task(s)) return *t;
  throw UsageError("--task must be nc or lp, got '" + s + "'");
}

std::vector<MethodCode> codes_arg(const std::string& list) {
  std::vector<MethodCode> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    if (item.empty()) continue;
    out.push_back(parse_code(item));
  }
  if (out.empty()) throw UsageError("--codes is empty");
  return out;
}

NodePair pair_arg(const std::string& s) {
  const auto dash = s.find('-');
  auto num = [&](std::string_view v) {
    NodeId id = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), id);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty()) throw UsageError("--pair must look like SRC-DST");
    return id;
  };
  if (dash == std::string::npos) throw UsageError("--pair must look like SRC-DST");
  const std::string_view sv(s);
  return {num(sv.substr(0, dash)), num(sv.substr(dash + 1))};
}

int cmd_validate(const std::string& data) {
  const auto g = load_dataset(data);
  std::cout << "dataset:   " << g.name() << (g.directed() ? " (directed)" : " (undirected)") << '\n'
            << "nodes:     " << g.node_count() << '\n'
            << "edges:     " << g.edge_count() << '\n'
            << "labels:    " << g.label_vocabulary().size() << '\n'
            << "dim:       " << g.dim() << '\n';
  for (const auto s : {Split::Train, Split::Val, Split::Test}) {
    std::cout << "split " << to_string(s) << ": " << split_members(g, s).size() << '\n';
  }
  std::cout << "pairs:     " << (g.has_pairs() ? std::to_string(g.pairs().size()) : std::string("none")) << '\n'
            << "digest:    " << dataset_digest(data) << '\n';
  return kExitOk;
}

int cmd_pagerank(const std::string& data, std::size_t top, double damping) {
  const auto g = load_dataset(data);
  PageRankParams params;
  params.damping = damping;
  const auto pr = pagerank(g, params);
  std::vector<NodeId> order(g.node_count());
  for (NodeId i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return pr.scores[a] > pr.scores[b]; });
  if (top > 0 && order.size() > top) order.resize(top);
  std::printf("iterations: %zu  converged: %s\n", pr.iterations, pr.converged ? "yes" : "no");
  for (const auto id : order) std::printf("%u\t%.10f\n", id, pr.scores[id]);
  return kExitOk;
}

int cmd_enumerate(const std::string& task) {
  for (const auto& c : enumerate_codes()) {
    if (!task.empty() && task_arg(task) == Task::LinkPrediction && c.primed()) continue;
    std::cout << format_code(c) << '\n';
  }
  return kExitOk;
}

struct RenderArgs {
  std::string data;
  std::string task = "nc";
  std::string code;
  long long node = -1;
  std::string pair;
  std::uint64_t seed = 0;
  bool cot = false;
  std::string templates;
  std::string format = "text";
  bool any_split = false;
};

int cmd_render(const RenderArgs& a) {
  const auto g = load_dataset(a.data);
  const auto task = task_arg(a.task);
  const auto code = parse_code(a.code);
  const auto pack = a.templates.empty() ? TemplatePack() : TemplatePack::load(a.templates);
  RenderOptions opt;
  opt.cot = a.cot;
  opt.allow_any_split = a.any_split;
  if (task == Task::LinkPrediction) opt.budget = SelectionBudget::link_prediction();
  const Selector selector(g);

  PromptBundle bundle;
  if (task == Task::NodeClassification) {
    if (a.node < 0) throw UsageError("render --task nc needs --node");
    bundle = render_nc(selector, code, static_cast<NodeId>(a.node), a.seed, opt, pack);
  } else {
    if (a.pair.empty()) throw UsageError("render --task lp needs --pair");
    bundle = render_lp(selector, code, pair_arg(a.pair), a.seed, opt, pack);
  }
  if (a.format == "json") {
    std::cout << bundle_to_json(bundle, g, 2) << '\n';
  } else {
    std::cout << "[system]\n" << bundle.system_text << "\n\n[user]\n" << bundle.user_text << '\n';
  }
  return kExitOk;
}

struct RunArgs {
  std::string data;
  std::string task;
  std::string codes;
  bool all_codes = false;
  std::string backend = "mock";
  std::string endpoint;
  std::string model;
  std::uint64_t seed = 0;
  std::size_t concurrency = 1;
  bool cot = false;
  std::string cot_sentence{kDefaultCotSentence};
  long long limit = -1;
  bool resume = false;
  std::string out;
  std::string templates;
  double temperature = 0.0;
  std::size_t max_tokens = 512;
  double timeout_s = 60.0;
  std::size_t max_retries = 3;
  std::size_t max_in_flight = 8;
  long long mock_delay_ms = 0;
};

int cmd_run(const RunArgs& a) {
  RunPlan plan;
  plan.task = task_arg(a.task);
  if (a.all_codes == !a.codes.empty()) throw UsageError("give exactly one of --codes and --all-codes");
  if (a.all_codes) {
    for (const auto& c : enumerate_codes()) {
      if (plan.task == Task::LinkPrediction && c.primed()) continue;
      plan.codes.push_back(c);
    }
  } else {
    plan.codes = codes_arg(a.codes);
  }
  plan.seed = a.seed;
  plan.render.cot = a.cot;
  plan.render.cot_sentence = a.cot_sentence;
  plan.render.budget = plan.task == Task::NodeClassification ? SelectionBudget::node_classification()
                                                             : SelectionBudget::link_prediction();
  if (!a.templates.empty()) plan.templates = TemplatePack::load(a.templates);
  plan.concurrency = a.concurrency;
  if (a.limit >= 0) plan.limit = static_cast<std::size_t>(a.limit);
  plan.output_dir = a.out;
  plan.resume = a.resume;

  auto& b = plan.backend;
  if (a.backend == "mock") {
    b.kind = BackendKind::Mock;
    b.model_name = "mock";
    b.mock_delay = std::chrono::milliseconds(a.mock_delay_ms);
  } else if (a.backend == "http") {
    b.kind = BackendKind::Http;
    if (a.endpoint.empty() || a.model.empty()) throw UsageError("--backend http needs --endpoint and --model");
    b.endpoint_url = a.endpoint;
    b.model_name = a.model;
  } else {
    throw UsageError("--backend must be mock or http");
  }
  b.temperature = a.temperature;
  b.max_output_tokens = a.max_tokens;
  b.timeout = std::chrono::milliseconds(static_cast<long long>(a.timeout_s * 1000.0));
  b.max_retries = a.max_retries;
  b.max_in_flight = std::max(a.max_in_flight, a.concurrency);

  const auto g = load_dataset(a.data);
  const auto outcome = run(g, plan, dataset_digest(a.data));

  std::printf("trials: %zu total, %zu run, %zu resumed\n", outcome.trials_total, outcome.trials_run,
              outcome.trials_resumed);
  for (const auto& [code, s] : outcome.per_code) {
    std::printf("%-8s acc=%6.2f n=%zu unparsed=%zu errors=%zu\n", code.c_str(), s.accuracy, s.n, s.unparsed, s.errors);
  }
  std::printf("S1: %s\nS2: %s\n", outcome.s1.value_or("-").c_str(), outcome.s2.value_or("-").c_str());
  if (outcome.backend_exhausted > 0) {
    std::fprintf(stderr, "gicl: %zu trial(s) exhausted backend retries\n", outcome.backend_exhausted);
    return kExitBackend;
  }
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& runs, const std::vector<std::string>& baselines,
               const std::string& format) {
  std::vector<Baseline> parsed;
  for (const auto& b : baselines) parsed.push_back(parse_baseline(b));
  std::vector<std::filesystem::path> dirs(runs.begin(), runs.end());
  const auto report = build_report(dirs, parsed);
  if (format == "json") {
    std::cout << render_json(report);
  } else if (format == "csv") {
    std::cout << render_csv(report);
  } else {
    std::cout << render_table(report);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph in-context-learning prompt benchmark"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gicl 0.1.0");

  std::string data;
  auto* validate = app.add_subcommand("validate", "Load a dataset directory and print its shape");
  validate->add_option("--data", data, "Dataset directory")->required();

  auto* analyze = app.add_subcommand("analyze", "Graph analytics");
  analyze->require_subcommand(1);
  std::size_t top = 10;
  double damping = 0.85;
  auto* pr = analyze->add_subcommand("pagerank", "Print the highest PageRank scores");
  pr->add_option("--data", data, "Dataset directory")->required();
  pr->add_option("--top", top, "Rows to print (0 for all)");
  pr->add_option("--damping", damping, "Damping factor");

  std::string enum_task;
  auto* enumerate = app.add_subcommand("enumerate", "List method codes");
  enumerate->add_option("--task", enum_task, "nc or lp (lp omits primed codes)");

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "Render one prompt");
  render->add_option("--data", ra.data, "Dataset directory")->required();
  render->add_option("--task", ra.task, "nc or lp");
  render->add_option("--code", ra.code, "Method code, e.g. 1SGR")->required();
  render->add_option("--node", ra.node, "Anchor node (nc)");
  render->add_option("--pair", ra.pair, "Anchor pair SRC-DST (lp)");
  render->add_option("--seed", ra.seed, "Sampling seed");
  render->add_flag("--cot", ra.cot, "Insert the chain-of-thought sentence");
  render->add_option("--templates", ra.templates, "Template directory");
  render->add_option("--format", ra.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  render->add_flag("--any-split", ra.any_split, "Allow anchors outside the test split");

  std::string templates_out;
  auto* templates = app.add_subcommand("templates", "Template utilities");
  templates->require_subcommand(1);
  auto* exp = templates->add_subcommand("export", "Write the built-in templates to a directory");
  exp->add_option("--out", templates_out, "Destination directory")->required();

  RunArgs rn;
  auto* runc = app.add_subcommand("run", "Evaluate method codes over a dataset");
  runc->add_option("--data", rn.data, "Dataset directory")->required();
  runc->add_option("--task", rn.task, "nc or lp")->required();
  runc->add_option("--codes", rn.codes, "Comma-separated method codes");
  runc->add_flag("--all-codes", rn.all_codes, "Every code valid for the task");
  runc->add_option("--backend", rn.backend, "mock or http");
  runc->add_option("--endpoint", rn.endpoint, "Base URL of a chat-completions API");
  runc->add_option("--model", rn.model, "Model name sent to the API");
  runc->add_option("--seed", rn.seed, "Sampling seed");
  runc->add_option("--concurrency", rn.concurrency, "Worker count")->check(CLI::PositiveNumber);
  runc->add_flag("--cot", rn.cot, "Insert the chain-of-thought sentence");
  runc->add_option("--cot-sentence", rn.cot_sentence, "Chain-of-thought sentence");
  runc->add_option("--limit", rn.limit, "Subjects per code")->check(CLI::NonNegativeNumber);
  runc->add_flag("--resume", rn.resume, "Continue an interrupted run");
  runc->add_option("--out", rn.out, "Run directory")->required();
  runc->add_option("--templates", rn.templates, "Template directory");
  runc->add_option("--temperature", rn.temperature, "Sampling temperature");
  runc->add_option("--max-tokens", rn.max_tokens, "Completion token cap");
  runc->add_option("--timeout", rn.timeout_s, "Per-request timeout in seconds");
  runc->add_option("--max-retries", rn.max_retries, "Retries on transport errors, 429 and 5xx");
  runc->add_option("--max-in-flight", rn.max_in_flight, "Concurrent HTTP request ceiling");
  runc->add_option("--mock-delay-ms", rn.mock_delay_ms, "Artificial latency for the mock backend");

  std::vector<std::string> report_runs;
  std::vector<std::string> report_baselines;
  std::string report_format = "table";
  auto* report = app.add_subcommand("report", "Summarise one or more run directories");
  report->add_option("--run", report_runs, "Run directory (repeatable)")->required();
  report->add_option("--baseline", report_baselines, "NAME=ACC (repeatable)");
  report->add_option("--format", report_format, "table, json or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(data);
    if (*pr) return cmd_pagerank(data, top, damping);
    if (*enumerate) return cmd_enumerate(enum_task);
    if (*render) return cmd_render(ra);
    if (*exp) {
      TemplatePack().save(templates_out);
      return kExitOk;
    }
    if (*runc) return cmd_run(rn);
    if (*report) return cmd_report(report_runs, report_baselines, report_format);
  } catch (const DatasetError& e) {
    std::cerr << "gicl: data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ReportError& e) {
    std::cerr << "gicl: data error: " << e.what() << '\n';
    return kExitData;
  } catch (const TemplateError& e) {
    std::cerr << "gicl: data error: " << e.what() << '\n';
    return kExitData;
  } catch (const CompletionError& e) {
    std::cerr << "gicl: backend error: " << e.what() << '\n';
    return e.kind() == CompletionError::Kind::RetriesExhausted ? kExitBackend : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "gicl: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
