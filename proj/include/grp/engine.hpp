#pragma once

// Record-level operations shared by the command-line tool and the C API.
// Each takes and returns the JSON record bodies documented in
// docs/schemas.md, so both front ends emit byte-identical output.

#include <optional>
#include <string>
#include <string_view>

#include "grp/json.hpp"
#include "grp/rewards.hpp"

namespace grp {

inline constexpr int kSchemaVersion = 1;

struct EngineConfig {
  ScoringOptions scoring;
  AuxMix aux;
  // No defaults on purpose: objective evaluation requires both.
  std::optional<double> epsilon;
  std::optional<double> beta;

  // Keys: weights{fmt,conn,ers,reach,rev}, token_counter, parse_mode,
  // aux{graph,fmt,conn,ers,reach,rev}, epsilon, beta. Missing keys keep
  // their defaults. Throws grp::Error(InvalidConfig).
  static EngineConfig from_json(const Json& j);
  Json to_json() const;
};

struct RecordResult {
  Json body;
  bool degraded = false;
};

// {id, trace_text} -> {id, reward, stats, diagnostics, diagnostic_codes,
// degraded, rejected}
RecordResult score_record(const Json& record, const EngineConfig& config);

// {id, trace_text} -> {id, valid, canonical|null, diagnostics}
// Strict parse plus style lints. degraded = not valid.
RecordResult validate_record(const Json& record, const EngineConfig& config);

// {group_id, samples:[{acc, aux | trace_text}]} ->
// {group_id, stats, samples:[{acc, aux, stratum, scae, grpo}]}
RecordResult advantage_record(const Json& group, const EngineConfig& config);

// {group_id?, sequences:[{logp_new, logp_old, logp_ref, advantage}]} ->
// objective breakdown. Throws InvalidConfig when epsilon or beta is unset.
RecordResult objective_record(const Json& group, const EngineConfig& config);

// {id, trace_text | trace, answer_correct?} -> QC report.
RecordResult qc_record(const Json& record, const EngineConfig& config);

// Scenario -> hacking report.
Json simulate_record(const Json& scenario);

// Score bare text: the score_record body without an id.
Json score_trace_json(std::string_view text, const EngineConfig& config);

// {trace: mirror|null, diagnostics} under the configured parse mode.
Json parse_trace_json(std::string_view text, const EngineConfig& config);

// Graph of a leniently parsed trace as "dot" or "edgelist" text.
std::string export_graph(std::string_view text, std::string_view format);

// Array of qc_record bodies -> {records, passed, pass_rate, violations}, with
// every violation code present.
Json qc_summary(const Json& reports);

}  // namespace grp
