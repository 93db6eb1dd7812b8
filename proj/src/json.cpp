#include "grp/json.hpp"

#include "grp/error.hpp"

namespace grp {

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorKind::InvalidArgument, what);
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_error(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) {
    schema_error(where + ": missing field '" + key + "'");
  }
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where + ": expected a number");
  return j.get<double>();
}

NodeId node_id(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() || j.get<NodeId>() == 0) {
    schema_error(where + ": expected a positive integer id");
  }
  return j.get<NodeId>();
}

std::vector<double> number_list(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

std::string dump_canonical(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

Json to_json(const Diagnostic& d) {
  return Json{
      {"severity", std::string(to_string(d.severity))},
      {"code", d.code},
      {"node_id", d.node_id ? Json(*d.node_id) : Json(nullptr)},
      {"message", d.message},
      {"span", Json::array({d.span.begin, d.span.end})},
  };
}

Json to_json(const std::vector<Diagnostic>& diags) {
  Json arr = Json::array();
  for (const auto& d : diags) arr.push_back(to_json(d));
  return arr;
}

Json to_json(const Trace& trace) {
  Json blocks = Json::array();
  for (const auto& b : trace.blocks) {
    Json nodes = Json::array();
    for (const auto& n : b.nodes) {
      nodes.push_back(
          {{"id", n.id}, {"parents", n.parents}, {"content", n.content}});
    }
    blocks.push_back(
        {{"label", std::string(to_string(b.label))}, {"nodes", nodes}});
  }
  return Json{{"blocks", blocks},
              {"answer_node_id", trace.answer_node_id
                                     ? Json(*trace.answer_node_id)
                                     : Json(nullptr)}};
}

Trace trace_from_json(const Json& j) {
  Trace trace;
  const Json& blocks = field(j, "blocks", "trace");
  if (!blocks.is_array()) schema_error("trace.blocks: expected an array");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::string where = "trace.blocks[" + std::to_string(b) + "]";
    const Json& lj = field(blocks[b], "label", where);
    if (!lj.is_string()) schema_error(where + ".label: expected a string");
    const auto label = label_from_string(lj.get<std::string>());
    if (!label) {
      schema_error(where + ".label: unknown label '" +
                   lj.get<std::string>() + "'");
    }
    TagBlock block{*label, {}};
    const Json& nodes = field(blocks[b], "nodes", where);
    if (!nodes.is_array()) schema_error(where + ".nodes: expected an array");
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const std::string nw = where + ".nodes[" + std::to_string(k) + "]";
      ReasoningNode node;
      node.id = node_id(field(nodes[k], "id", nw), nw + ".id");
      const Json& parents = field(nodes[k], "parents", nw);
      if (!parents.is_array()) schema_error(nw + ".parents: expected an array");
      for (const auto& p : parents) {
        node.parents.push_back(node_id(p, nw + ".parents"));
      }
      const Json& content = field(nodes[k], "content", nw);
      if (!content.is_string()) schema_error(nw + ".content: expected a string");
      node.content = content.get<std::string>();
      block.nodes.push_back(std::move(node));
    }
    trace.blocks.push_back(std::move(block));
  }
  if (const auto it = j.find("answer_node_id");
      it != j.end() && !it->is_null()) {
    trace.answer_node_id = node_id(*it, "trace.answer_node_id");
  }
  return trace;
}

Json to_json(const RewardVector& r) {
  return Json{
      {"fmt", r.fmt.total},   {"fmt_dens", r.fmt.dens},
      {"fmt_topo", r.fmt.topo}, {"fmt_para", r.fmt.para},
      {"conn", r.conn},       {"ers", r.ers},
      {"reach", r.reach},     {"rev", r.rev},
      {"total", r.total},
  };
}

Json to_json(const GraphStats& s) {
  return Json{
      {"nodes", s.nodes},
      {"edges", s.edges},
      {"components", s.components},
      {"ers_nodes", s.ers_nodes},
      {"shortest_path",
       s.shortest_path ? Json(*s.shortest_path) : Json(nullptr)},
  };
}

Json to_json(const ScoreReport& report) {
  Json codes = Json::array();
  for (const auto& d : report.diagnostics) codes.push_back(d.code);
  return Json{
      {"reward", to_json(report.reward)},
      {"stats", to_json(report.stats)},
      {"diagnostics", report.diagnostics.size()},
      {"diagnostic_codes", codes},
      {"degraded", report.degraded},
      {"rejected", report.rejected},
  };
}

Json to_json(const Violation& v) {
  return Json{{"code", std::string(to_string(v.code))},
              {"node_ids", v.node_ids},
              {"message", v.message}};
}

Json to_json(const QCReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) violations.push_back(to_json(v));
  Json semantic = Json::array();
  for (const auto& f : report.semantic) {
    semantic.push_back({{"node_id", f.node_id},
                        {"check", std::string(to_string(f.check))},
                        {"passed", f.verdict.passed},
                        {"reason", f.verdict.reason}});
  }
  return Json{
      {"id", report.trace_id},
      {"passed", report.passed},
      {"needs_refinement", report.needs_refinement()},
      {"violations", violations},
      {"semantic", semantic},
      {"parse_diagnostics", to_json(report.parse_diagnostics)},
  };
}

Json to_json(const QCSummary& summary) {
  return Json{{"records", summary.records},
              {"passed", summary.passed},
              {"pass_rate", summary.pass_rate()},
              {"violations", summary.violations}};
}

Json to_json(const ObjectiveResult& result) {
  Json seqs = Json::array();
  for (const auto& s : result.sequences) {
    Json tokens = Json::array();
    for (const auto& t : s.tokens) {
      tokens.push_back({{"ratio", t.ratio},
                        {"clipped_ratio", t.clipped_ratio},
                        {"advantage", t.advantage},
                        {"surrogate", t.surrogate},
                        {"kl", t.kl}});
    }
    seqs.push_back({{"value", s.value},
                    {"surrogate_mean", s.surrogate_mean},
                    {"kl_mean", s.kl_mean},
                    {"tokens", tokens}});
  }
  return Json{{"objective", result.objective},
              {"surrogate_mean", result.surrogate_mean},
              {"kl_mean", result.kl_mean},
              {"sequences", seqs}};
}

std::vector<SequenceLogProbs> sequences_from_json(const Json& j) {
  if (!j.is_array()) schema_error("sequences: expected an array");
  std::vector<SequenceLogProbs> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "sequences[" + std::to_string(i) + "]";
    SequenceLogProbs s;
    s.logp_new = number_list(field(j[i], "logp_new", where), where + ".logp_new");
    s.logp_old = number_list(field(j[i], "logp_old", where), where + ".logp_old");
    s.logp_ref = number_list(field(j[i], "logp_ref", where), where + ".logp_ref");
    const Json& adv = field(j[i], "advantage", where);
    if (adv.is_array()) {
      s.advantage = number_list(adv, where + ".advantage");
    } else {
      s.advantage = number(adv, where + ".advantage");
    }
    out.push_back(std::move(s));
  }
  return out;
}

HackingScenario scenario_from_json(const Json& j) {
  HackingScenario s;
  if (!j.is_object()) schema_error("scenario: expected an object");
  const Json& seed = field(j, "seed", "scenario");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
    schema_error("scenario.seed: expected a non-negative integer");
  }
  s.seed = seed.get<std::uint64_t>();
  const auto count = [&](const char* key, std::size_t& dst) {
    if (const auto it = j.find(key); it != j.end()) {
      if (!it->is_number_unsigned()) {
        schema_error(std::string("scenario.") + key +
                     ": expected a non-negative integer");
      }
      dst = it->get<std::size_t>();
    }
  };
  const auto range = [&](const char* key, UniformRange& dst) {
    if (const auto it = j.find(key); it != j.end()) {
      if (!it->is_array() || it->size() != 2) {
        schema_error(std::string("scenario.") + key + ": expected [lo, hi]");
      }
      dst.lo = number((*it)[0], std::string("scenario.") + key);
      dst.hi = number((*it)[1], std::string("scenario.") + key);
    }
  };
  count("groups", s.groups);
  count("group_size", s.group_size);
  if (const auto it = j.find("frac_correct"); it != j.end()) {
    s.frac_correct = number(*it, "scenario.frac_correct");
  }
  range("correct_aux", s.correct_aux);
  range("wrong_aux", s.wrong_aux);
  s.validate();
  return s;
}

Json to_json(const HackingScenario& s) {
  return Json{{"seed", s.seed},
              {"groups", s.groups},
              {"group_size", s.group_size},
              {"frac_correct", s.frac_correct},
              {"correct_aux", {s.correct_aux.lo, s.correct_aux.hi}},
              {"wrong_aux", {s.wrong_aux.lo, s.wrong_aux.hi}}};
}

namespace {

Json to_json(const EstimatorStats& e) {
  return Json{{"wrong_positive", e.wrong_positive},
              {"wrong_positive_fraction", e.wrong_positive_fraction},
              {"mean_wrong_advantage", e.mean_wrong_advantage},
              {"mean_correct_advantage", e.mean_correct_advantage},
              {"ordering_violations", e.ordering_violations}};
}

}  // namespace

Json to_json(const HackingReport& r) {
  return Json{{"scenario", to_json(r.scenario)},
              {"samples", r.samples},
              {"correct_samples", r.correct_samples},
              {"wrong_samples", r.wrong_samples},
              {"mixed_groups", r.mixed_groups},
              {"grpo", to_json(r.grpo)},
              {"scae", to_json(r.scae)}};
}

Json to_json(const RewardWeights& w) {
  return Json{{"fmt", w.fmt},
              {"conn", w.conn},
              {"ers", w.ers},
              {"reach", w.reach},
              {"rev", w.rev}};
}

Json to_json(const AuxMix& m) {
  return Json{{"graph", m.graph}, {"fmt", m.fmt},     {"conn", m.conn},
              {"ers", m.ers},     {"reach", m.reach}, {"rev", m.rev}};
}

}  // namespace grp
