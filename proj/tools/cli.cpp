#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "grp/grp.h"
#include "run_config.hpp"

namespace grpcli {

namespace {

using nlohmann::json;

std::string dump(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string take(char* s) {
  std::string r = s ? s : "";
  grp_string_free(s);
  return r;
}

class Engine {
 public:
  explicit Engine(const json& config) {
    char* error = nullptr;
    const std::string text = dump(config);
    if (grp_engine_create(text.c_str(), &engine_, &error) != GRP_OK) {
      throw ConfigError(message_of(take(error)));
    }
  }
  ~Engine() { grp_engine_destroy(engine_); }
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const grp_engine* get() const { return engine_; }

  json config() const {
    char* out = nullptr;
    grp_engine_config(engine_, &out);
    return json::parse(take(out));
  }

  static std::string message_of(const std::string& error_json) {
    try {
      return json::parse(error_json).at("error").at("message").get<std::string>();
    } catch (const json::exception&) {
      return error_json;
    }
  }

 private:
  grp_engine* engine_ = nullptr;
};

struct Record {
  std::size_t line_no = 0;
  std::string text;
};

struct Result {
  std::string line;
  bool degraded = false;
  bool failed = false;
};

// One C API call per record: (engine, record_json, out) -> status.
using RecordCall = grp_status (*)(const grp_engine*, const char*, char**);
using DegradedTest = std::function<bool(const json&)>;

Result call_record(const Engine& engine, RecordCall call, const std::string& record,
                   const DegradedTest& degraded) {
  char* out = nullptr;
  const grp_status status = call(engine.get(), record.c_str(), &out);
  Result r;
  r.line = take(out);
  if (status != GRP_OK) {
    r.failed = true;
  } else if (degraded) {
    r.degraded = degraded(json::parse(r.line));
  }
  return r;
}

// Runs fn over all records on up to `jobs` threads. Results keep input order.
std::vector<Result> run_records(const std::vector<Record>& records, unsigned jobs,
                                const std::function<Result(const Record&)>& fn) {
  std::vector<Result> results(records.size());
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), records.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < records.size(); ++i) results[i] = fn(records[i]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < records.size(); i = next++) {
        results[i] = fn(records[i]);
      }
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

std::string read_all(const std::optional<std::string>& path, std::istream& in) {
  std::ostringstream buf;
  if (!path || *path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(*path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot read input '" + *path + "'");
  buf << file.rdbuf();
  return buf.str();
}

// Non-blank lines with their 1-based line numbers.
std::vector<Record> split_records(const std::string& text) {
  std::vector<Record> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back({line_no, std::move(line)});
  }
  return out;
}

void write_output(const std::optional<std::string>& path, const std::string& data,
                  std::ostream& out) {
  if (!path || *path == "-") {
    out << data;
    out.flush();
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write output '" + *path + "'");
  file << data;
  if (!file.flush()) throw std::runtime_error("cannot write output '" + *path + "'");
}

std::string header_line(const std::string& command, const json& config) {
  return dump(json{{"header",
                    {{"tool", "grpscore"},
                     {"schema_version", grp_schema_version()},
                     {"command", command},
                     {"config", config}}}}) +
         "\n";
}

// Flags shared by the record-processing subcommands. Values go through
// RunConfig::set so flags and config files accept the same spellings.
struct CommonFlags {
  std::string config_path;
  std::string input;
  std::string output;
  std::string jobs;
  std::vector<std::string> weights;
  std::vector<std::string> sets;
  std::string token_counter;
  std::string mode;
  std::string epsilon;
  std::string beta;
  bool raw = false;

  RunConfig layer() const {
    RunConfig c;
    for (const auto& w : weights) {
      const auto eq = w.find('=');
      if (eq == std::string::npos) throw ConfigError("--weight expects name=value");
      c.set("weights." + w.substr(0, eq), w.substr(eq + 1));
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value");
      c.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!token_counter.empty()) c.set("token_counter", token_counter);
    if (!mode.empty()) c.set("parse_mode", mode);
    if (!epsilon.empty()) c.set("epsilon", epsilon);
    if (!beta.empty()) c.set("beta", beta);
    if (!input.empty()) c.set("input", input);
    if (!output.empty()) c.set("output", output);
    if (!jobs.empty()) c.set("jobs", jobs);
    return c;
  }

  RunConfig effective() const {
    RunConfig c;
    if (!config_path.empty()) c = load_config_file(config_path);
    c.merge(layer());
    return c;
  }
};

void add_common(CLI::App* sub, CommonFlags& f, bool with_raw) {
  sub->add_option("input", f.input, "Input file (JSONL); '-' or absent reads stdin");
  sub->add_option("-o,--output", f.output, "Output file; default stdout");
  sub->add_option("-c,--config", f.config_path, "key = value config file");
  sub->add_option("-j,--jobs", f.jobs, "Maximum worker threads");
  sub->add_option("-w,--weight", f.weights, "Reward weight, e.g. fmt=0.4 (repeatable)");
  sub->add_option("--set", f.sets, "Any config setting as key=value (repeatable)");
  sub->add_option("--token-counter", f.token_counter, "whitespace or codepoint");
  sub->add_option("--mode", f.mode, "Parse mode: lenient or strict");
  sub->add_option("--epsilon", f.epsilon, "Clip radius for objective");
  sub->add_option("--beta", f.beta, "KL coefficient for objective");
  if (with_raw) {
    sub->add_flag("--raw", f.raw, "Treat the whole input as one trace text");
  }
}

struct Batch {
  std::string command;
  RecordCall call;
  DegradedTest degraded;
};

int run_batch(const Batch& batch, const CommonFlags& flags, std::istream& in,
              std::ostream& out, std::ostream& err, std::string* qc_summary) {
  const RunConfig config = flags.effective();
  const Engine engine(config.engine_json());
  if (batch.command == "objective" && (!config.epsilon || !config.beta)) {
    throw ConfigError("objective requires epsilon and beta (flags or config file)");
  }

  const std::string input = read_all(config.input, in);
  std::vector<Record> records;
  if (flags.raw) {
    const std::string id = config.input.value_or("-");
    records.push_back({1, dump(json{{"id", id}, {"trace_text", input}})});
  } else {
    records = split_records(input);
  }

  const auto results = run_records(records, config.jobs.value_or(1), [&](const Record& r) {
    return call_record(engine, batch.call, r.text, batch.degraded);
  });

  std::string data = header_line(batch.command, engine.config());
  bool degraded = false;
  bool failed = false;
  for (std::size_t i = 0; i < results.size(); ++i) {
    data += results[i].line;
    data += '\n';
    degraded = degraded || results[i].degraded;
    if (results[i].failed) {
      failed = true;
      err << "grpscore " << batch.command << ": line " << records[i].line_no << ": "
          << Engine::message_of(results[i].line) << "\n";
    }
  }
  write_output(config.output, data, out);

  if (qc_summary) {
    json reports = json::array();
    for (const auto& r : results) {
      if (!r.failed) reports.push_back(json::parse(r.line));
    }
    char* s = nullptr;
    const std::string text = dump(reports);
    if (grp_qc_summary(text.c_str(), &s) != GRP_OK) {
      throw std::runtime_error(Engine::message_of(take(s)));
    }
    write_output(*qc_summary, take(s) + "\n", out);
  }

  if (failed) return kExitFailure;
  return degraded ? kExitDegraded : kExitOk;
}

struct SimulateFlags {
  std::string scenario_path;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> groups;
  std::optional<std::size_t> group_size;
  std::optional<double> frac_correct;
  std::vector<double> correct_aux;
  std::vector<double> wrong_aux;
};

int run_simulate(const SimulateFlags& f, std::ostream& out) {
  json scenario = json::object();
  if (!f.scenario_path.empty()) {
    std::ifstream file(f.scenario_path, std::ios::binary);
    if (!file) throw ConfigError("cannot read scenario '" + f.scenario_path + "'");
    try {
      scenario = json::parse(file);
    } catch (const json::exception& e) {
      throw ConfigError(f.scenario_path + ": " + e.what());
    }
  }
  if (f.seed) scenario["seed"] = *f.seed;
  if (f.groups) scenario["groups"] = *f.groups;
  if (f.group_size) scenario["group_size"] = *f.group_size;
  if (f.frac_correct) scenario["frac_correct"] = *f.frac_correct;
  if (!f.correct_aux.empty()) scenario["correct_aux"] = f.correct_aux;
  if (!f.wrong_aux.empty()) scenario["wrong_aux"] = f.wrong_aux;

  char* s = nullptr;
  const std::string text = dump(scenario);
  const grp_status status = grp_simulate_hacking(text.c_str(), &s);
  const std::string result = take(s);
  if (status != GRP_OK) throw ConfigError(Engine::message_of(result));
  const json report = json::parse(result);
  const std::string data =
      header_line("simulate-hacking", json{{"scenario", report.at("scenario")}}) +
      result + "\n";
  write_output(f.output.empty() ? std::nullopt : std::optional(f.output), data, out);
  return kExitOk;
}

int run_graph(const std::string& input, const std::string& format,
              const std::string& output, std::istream& in, std::ostream& out) {
  const std::string text =
      read_all(input.empty() ? std::nullopt : std::optional(input), in);
  char* s = nullptr;
  const grp_status status =
      grp_export_graph(text.data(), text.size(), format.c_str(), &s);
  const std::string result = take(s);
  if (status != GRP_OK) throw ConfigError(Engine::message_of(result));
  write_output(output.empty() ? std::nullopt : std::optional(output), result, out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Score, check, and turn graph-structured reasoning traces into "
               "policy-gradient advantages.",
               "grpscore"};
  app.require_subcommand(1);
  app.set_version_flag("--version", grp_version());

  CommonFlags common;
  auto* validate = app.add_subcommand("validate", "Strict parse and lint of each trace");
  add_common(validate, common, true);
  auto* score = app.add_subcommand("score", "Process rewards for each rollout");
  add_common(score, common, true);
  auto* advantage = app.add_subcommand("advantage", "SCAE and GRPO advantages per group");
  add_common(advantage, common, false);
  auto* objective = app.add_subcommand("objective", "Clipped-surrogate objective per group");
  add_common(objective, common, false);
  auto* qc = app.add_subcommand("qc", "Structural quality check of a dataset");
  add_common(qc, common, true);
  std::string summary_path;
  qc->add_option("--summary", summary_path, "Write counts per violation code here");

  SimulateFlags sim;
  auto* simulate = app.add_subcommand(
      "simulate-hacking", "Compare estimators on groups with inflated wrong-sample rewards");
  simulate->add_option("--scenario", sim.scenario_path, "Scenario JSON file");
  simulate->add_option("--seed", sim.seed, "Random seed (required)");
  simulate->add_option("--groups", sim.groups, "Number of groups");
  simulate->add_option("--group-size", sim.group_size, "Samples per group");
  simulate->add_option("--frac-correct", sim.frac_correct, "Probability a sample is correct");
  simulate->add_option("--correct-aux", sim.correct_aux, "Correct-sample aux range lo,hi")
      ->expected(2)
      ->delimiter(',');
  simulate->add_option("--wrong-aux", sim.wrong_aux, "Wrong-sample aux range lo,hi")
      ->expected(2)
      ->delimiter(',');
  simulate->add_option("-o,--output", sim.output, "Output file; default stdout");

  std::string graph_input;
  std::string graph_format = "dot";
  std::string graph_output;
  auto* graph = app.add_subcommand("graph", "Export the reasoning graph of one trace");
  graph->add_option("input", graph_input, "Trace text file; '-' or absent reads stdin");
  graph->add_option("-f,--format", graph_format, "dot or edgelist")
      ->check(CLI::IsMember({"dot", "edgelist"}));
  graph->add_option("-o,--output", graph_output, "Output file; default stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFailure;
  }

  const auto degraded_flag = [](const json& j) { return j.value("degraded", false); };
  try {
    if (*validate) {
      return run_batch({"validate", grp_validate_record,
                        [](const json& j) { return !j.value("valid", false); }},
                       common, in, out, err, nullptr);
    }
    if (*score) {
      return run_batch({"score", grp_score_record, degraded_flag}, common, in, out, err,
                       nullptr);
    }
    if (*advantage) {
      return run_batch({"advantage", grp_group_advantages, degraded_flag}, common, in,
                       out, err, nullptr);
    }
    if (*objective) {
      return run_batch({"objective", grp_objective, nullptr}, common, in, out, err,
                       nullptr);
    }
    if (*qc) {
      return run_batch({"qc", grp_qc_record, nullptr}, common, in, out, err,
                       summary_path.empty() ? nullptr : &summary_path);
    }
    if (*simulate) return run_simulate(sim, out);
    if (*graph) return run_graph(graph_input, graph_format, graph_output, in, out);
  } catch (const std::exception& e) {
    err << "grpscore: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace grpcli
