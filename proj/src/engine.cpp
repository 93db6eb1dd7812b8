#include "grp/engine.hpp"

#include <vector>

#include "grp/advantage.hpp"
#include "grp/error.hpp"
#include "grp/graph.hpp"
#include "grp/objective.hpp"
#include "grp/qc.hpp"
#include "grp/simulate.hpp"
#include "grp/trace.hpp"

namespace grp {

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::InvalidConfig, what);
}

[[noreturn]] void input_error(const std::string& what) {
  throw Error(ErrorKind::InvalidArgument, what);
}

double config_number(const Json& j, const std::string& key) {
  if (!j.is_number()) config_error("config." + key + ": expected a number");
  return j.get<double>();
}

std::string config_string(const Json& j, const std::string& key) {
  if (!j.is_string()) config_error("config." + key + ": expected a string");
  return j.get<std::string>();
}

// Reads numeric members of obj into the named slots; rejects unknown keys.
template <std::size_t N>
void read_fields(const Json& obj, const std::string& section,
                 const std::pair<const char*, double*> (&slots)[N]) {
  if (!obj.is_object()) config_error("config." + section + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const auto& [name, dst] : slots) {
      if (key == name) {
        *dst = config_number(value, section + "." + key);
        known = true;
      }
    }
    if (!known) config_error("config." + section + ": unknown key '" + key + "'");
  }
}

const Json& require(const Json& record, const char* key) {
  if (!record.is_object()) input_error("record: expected a JSON object");
  const auto it = record.find(key);
  if (it == record.end()) input_error(std::string("record: missing field '") + key + "'");
  return *it;
}

std::string require_text(const Json& record, const char* key) {
  const Json& j = require(record, key);
  if (!j.is_string()) input_error(std::string("record.") + key + ": expected a string");
  return j.get<std::string>();
}

Json id_of(const Json& record, const char* key = "id") {
  if (!record.is_object()) return nullptr;
  const auto it = record.find(key);
  return it == record.end() ? Json(nullptr) : *it;
}

}  // namespace

EngineConfig EngineConfig::from_json(const Json& j) {
  EngineConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) config_error("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "weights") {
      RewardWeights& w = c.scoring.weights;
      const std::pair<const char*, double*> slots[] = {
          {"fmt", &w.fmt}, {"conn", &w.conn}, {"ers", &w.ers},
          {"reach", &w.reach}, {"rev", &w.rev}};
      read_fields(value, "weights", slots);
    } else if (key == "aux") {
      AuxMix& m = c.aux;
      const std::pair<const char*, double*> slots[] = {
          {"graph", &m.graph}, {"fmt", &m.fmt},     {"conn", &m.conn},
          {"ers", &m.ers},     {"reach", &m.reach}, {"rev", &m.rev}};
      read_fields(value, "aux", slots);
    } else if (key == "token_counter") {
      c.scoring.counter = TokenCounter::by_name(config_string(value, key));
    } else if (key == "parse_mode") {
      const auto mode = parse_mode_from_string(config_string(value, key));
      if (!mode) config_error("config.parse_mode: expected 'strict' or 'lenient'");
      c.scoring.mode = *mode;
    } else if (key == "epsilon") {
      if (!value.is_null()) c.epsilon = config_number(value, key);
    } else if (key == "beta") {
      if (!value.is_null()) c.beta = config_number(value, key);
    } else {
      config_error("config: unknown key '" + key + "'");
    }
  }
  c.scoring.weights.validate();
  c.aux.validate();
  if (c.epsilon && !(*c.epsilon > 0.0)) config_error("config.epsilon must be > 0");
  if (c.beta && !(*c.beta >= 0.0)) config_error("config.beta must be >= 0");
  return c;
}

Json EngineConfig::to_json() const {
  return Json{
      {"weights", grp::to_json(scoring.weights)},
      {"token_counter", scoring.counter.name()},
      {"parse_mode", std::string(to_string(scoring.mode))},
      {"aux", grp::to_json(aux)},
      {"epsilon", epsilon ? Json(*epsilon) : Json(nullptr)},
      {"beta", beta ? Json(*beta) : Json(nullptr)},
  };
}

Json score_trace_json(std::string_view text, const EngineConfig& config) {
  return to_json(score_text(text, config.scoring));
}

RecordResult score_record(const Json& record, const EngineConfig& config) {
  const std::string text = require_text(record, "trace_text");
  const ScoreReport report = score_text(text, config.scoring);
  Json body = to_json(report);
  body["id"] = id_of(record);
  return {std::move(body), report.degraded};
}

RecordResult validate_record(const Json& record, const EngineConfig&) {
  const std::string text = require_text(record, "trace_text");
  const ParseResult parsed = parse_trace(text, ParseMode::Strict);
  std::vector<Diagnostic> diags = parsed.diagnostics;
  const auto style = style_diagnostics(parsed);
  diags.insert(diags.end(), style.begin(), style.end());
  const bool valid = parsed.trace.has_value() && !has_errors(diags);
  Json body{{"id", id_of(record)},
            {"valid", valid},
            {"canonical",
             valid ? Json(serialize_trace(*parsed.trace)) : Json(nullptr)},
            {"diagnostics", to_json(diags)}};
  return {std::move(body), !valid};
}

RecordResult advantage_record(const Json& group, const EngineConfig& config) {
  const Json& samples = require(group, "samples");
  if (!samples.is_array()) input_error("record.samples: expected an array");
  if (samples.empty()) input_error("group has no samples");

  bool degraded = false;
  std::vector<GroupSample> batch;
  std::vector<double> combined;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Json& s = samples[i];
    const std::string where = "samples[" + std::to_string(i) + "]";
    if (!s.is_object()) input_error(where + ": expected an object");
    const auto acc = s.find("acc");
    if (acc == s.end() || !acc->is_number()) {
      input_error(where + ".acc: expected a number");
    }
    GroupSample g{acc->get<double>(), 0.0};
    if (const auto aux = s.find("aux"); aux != s.end()) {
      if (!aux->is_number()) input_error(where + ".aux: expected a number");
      g.aux = aux->get<double>();
    } else if (const auto text = s.find("trace_text"); text != s.end()) {
      if (!text->is_string()) input_error(where + ".trace_text: expected a string");
      const ScoreReport r = score_text(text->get<std::string>(), config.scoring);
      degraded = degraded || r.degraded;
      g.aux = config.aux.apply(r.reward);
    } else {
      input_error(where + ": needs 'aux' or 'trace_text'");
    }
    batch.push_back(g);
    combined.push_back(g.acc + g.aux);
  }

  const ScaeOutput scae = scae_advantages(batch);
  const std::vector<double> grpo = grpo_advantages(combined);

  Json out_samples = Json::array();
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out_samples.push_back(
        {{"acc", batch[i].acc},
         {"aux", batch[i].aux},
         {"stratum", std::string(to_string(scae.samples[i].stratum))},
         {"scae", scae.samples[i].advantage},
         {"grpo", grpo[i]}});
  }
  const auto opt = [](const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
  };
  Json body{{"group_id", id_of(group, "group_id")},
            {"stats",
             {{"mean_acc", scae.stats.mean_acc},
              {"mean_aux_correct", opt(scae.stats.mean_aux_correct)},
              {"mean_aux_wrong", opt(scae.stats.mean_aux_wrong)},
              {"correct", scae.stats.correct},
              {"wrong", scae.stats.wrong}}},
            {"samples", out_samples},
            {"degraded", degraded}};
  return {std::move(body), degraded};
}

RecordResult objective_record(const Json& group, const EngineConfig& config) {
  if (!config.epsilon || !config.beta) {
    config_error("objective needs both epsilon and beta to be set");
  }
  const auto seqs = sequences_from_json(require(group, "sequences"));
  const ObjectiveConfig oc{*config.epsilon, *config.beta};
  Json body = to_json(grpo_objective(seqs, oc));
  body["group_id"] = id_of(group, "group_id");
  body["epsilon"] = oc.epsilon;
  body["beta"] = oc.beta;
  return {std::move(body), false};
}

RecordResult qc_record(const Json& record, const EngineConfig&) {
  const Json id = id_of(record);
  if (!record.is_object()) input_error("record: expected a JSON object");
  QCReport report;
  if (const auto text = record.find("trace_text"); text != record.end()) {
    if (!text->is_string()) input_error("record.trace_text: expected a string");
    ParseResult parsed = parse_trace(text->get<std::string>(), ParseMode::Lenient);
    report = structural_check(*parsed.trace);
    report.parse_diagnostics = std::move(parsed.diagnostics);
  } else if (const auto mirror = record.find("trace"); mirror != record.end()) {
    const Trace trace = trace_from_json(*mirror);
    report = structural_check(trace);
    report.parse_diagnostics = check_trace(trace);
  } else {
    input_error("record: needs 'trace_text' or 'trace'");
  }
  Json body = to_json(report);
  body["id"] = id;
  if (const auto ac = record.find("answer_correct");
      ac != record.end() && !ac->is_null()) {
    if (!ac->is_boolean()) input_error("record.answer_correct: expected a boolean");
    body["answer_correct"] = *ac;
  }
  return {std::move(body), false};
}

Json simulate_record(const Json& scenario) {
  return to_json(simulate_hacking(scenario_from_json(scenario)));
}

Json parse_trace_json(std::string_view text, const EngineConfig& config) {
  const ParseResult parsed = parse_trace(text, config.scoring.mode);
  return Json{{"trace", parsed.trace ? to_json(*parsed.trace) : Json(nullptr)},
              {"diagnostics", to_json(parsed.diagnostics)}};
}

std::string export_graph(std::string_view text, std::string_view format) {
  if (format != "dot" && format != "edgelist") {
    input_error("graph format must be 'dot' or 'edgelist'");
  }
  ParseResult parsed = parse_trace(text, ParseMode::Lenient);
  const ReasoningGraph graph =
      build_graph(*parsed.trace, std::move(parsed.diagnostics));
  return format == "dot" ? to_dot(graph) : to_edge_list(graph);
}

Json qc_summary(const Json& reports) {
  if (!reports.is_array()) input_error("reports: expected an array");
  QCSummary summary;
  for (const auto& r : reports) {
    if (!r.is_object()) input_error("reports: expected objects");
    ++summary.records;
    if (r.value("passed", false)) ++summary.passed;
    const auto v = r.find("violations");
    if (v == r.end() || !v->is_array()) continue;
    for (const auto& item : *v) {
      const auto code = item.find("code");
      if (code == item.end() || !code->is_string() ||
          !summary.violations.count(code->get<std::string>())) {
        input_error("reports: unknown violation code");
      }
      ++summary.violations[code->get<std::string>()];
    }
  }
  return to_json(summary);
}

}  // namespace grp
