#pragma once

// JSON encodings shared by the C API, the CLI, and bindings. Field names are
// part of the external interface; see docs/schemas.md.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "grp/advantage.hpp"
#include "grp/diagnostic.hpp"
#include "grp/objective.hpp"
#include "grp/qc.hpp"
#include "grp/rewards.hpp"
#include "grp/simulate.hpp"
#include "grp/trace.hpp"

namespace grp {

using Json = nlohmann::json;

// Compact, key-sorted, invalid UTF-8 replaced by U+FFFD.
std::string dump_canonical(const Json& j);

Json to_json(const Diagnostic& d);
Json to_json(const std::vector<Diagnostic>& diags);

// Mirror form: {"blocks":[{"label","nodes":[{"id","parents","content"}]}],
// "answer_node_id": id|null}
Json to_json(const Trace& trace);
// Reads the mirror form. Checks shape and types only; use check_trace for
// invariants. Throws grp::Error(InvalidArgument).
Trace trace_from_json(const Json& j);

// Flat: fmt, fmt_dens, fmt_topo, fmt_para, conn, ers, reach, rev, total.
Json to_json(const RewardVector& r);
Json to_json(const GraphStats& s);
Json to_json(const ScoreReport& report);

Json to_json(const Violation& v);
Json to_json(const QCReport& report);
Json to_json(const QCSummary& summary);

Json to_json(const ObjectiveResult& result);
std::vector<SequenceLogProbs> sequences_from_json(const Json& j);

HackingScenario scenario_from_json(const Json& j);
Json to_json(const HackingScenario& s);
Json to_json(const HackingReport& report);

Json to_json(const RewardWeights& w);
Json to_json(const AuxMix& m);

}  // namespace grp
