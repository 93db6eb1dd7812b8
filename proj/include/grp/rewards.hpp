#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grp/diagnostic.hpp"
#include "grp/graph.hpp"
#include "grp/trace.hpp"

namespace grp {

// Weights of the five process rewards. Must lie in [0, 1] and sum to 1.
struct RewardWeights {
  double fmt = 0.2;
  double conn = 0.2;
  double ers = 0.2;
  double reach = 0.2;
  double rev = 0.2;

  // Throws grp::Error(InvalidConfig) when out of range or not summing to 1
  // within 1e-9.
  void validate() const;
  bool operator==(const RewardWeights&) const = default;
};

struct FormatScores {
  double dens = 0.0;
  double topo = 0.0;
  double para = 0.0;
  double total = 0.0;  // (dens + topo + para) / 3

  bool operator==(const FormatScores&) const = default;
};

struct RewardComponents {
  FormatScores fmt;
  double conn = 0.0;
  double ers = 0.0;
  double reach = 0.0;
  double rev = 0.0;

  bool operator==(const RewardComponents&) const = default;
};

struct RewardVector {
  FormatScores fmt;
  double conn = 0.0;
  double ers = 0.0;
  double reach = 0.0;
  double rev = 0.0;
  double total = 0.0;

  bool operator==(const RewardVector&) const = default;
};

// Maps node content to a token count. Must be deterministic and return 0 for
// empty text.
class TokenCounter {
 public:
  using Fn = std::function<std::size_t(std::string_view)>;

  TokenCounter(std::string name, Fn fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}

  // Maximal runs of non-whitespace (Unicode White_Space) code points.
  static TokenCounter whitespace();
  // One token per code point that is not whitespace.
  static TokenCounter codepoints();
  // Throws grp::Error(InvalidConfig) for an unknown name.
  static TokenCounter by_name(std::string_view name);

  std::size_t operator()(std::string_view text) const { return fn_(text); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

std::size_t count_whitespace_tokens(std::string_view text);
std::size_t count_codepoint_tokens(std::string_view text);

// Label structure format reward. Each sub-score is 1 when its denominator set
// is empty; an empty graph scores 0 everywhere.
//   dens: aggregate/refine tag blocks wrapping exactly one node
//   topo: known/aggregate/refine nodes with the required parent count
//   para: cognitive tag blocks with no parent-child edge among their nodes
FormatScores reward_format(const Trace& trace, const ReasoningGraph& graph);

// 1 / (number of weakly connected components); 0 for an empty graph.
double reward_connectivity(const ReasoningGraph& graph);

// Token mass of the effective reasoning subgraph over total token mass.
double reward_ers_ratio(const ReasoningGraph& graph,
                        const TokenCounter& counter);

// 1 iff the answer is reachable from the virtual source.
double reward_reachability(const ReasoningGraph& graph);

// Fraction of nodes that reach the answer (the answer counts itself).
double reward_reverse_search(const ReasoningGraph& graph);

// Weighted total. Throws grp::Error on invalid weights or a component
// outside [0, 1].
RewardVector reward_total(const RewardComponents& components,
                          const RewardWeights& weights);

// Convex mix of reward terms used as the auxiliary reward for advantage
// estimation. The default is the weighted graph total alone.
struct AuxMix {
  double graph = 1.0;
  double fmt = 0.0;
  double conn = 0.0;
  double ers = 0.0;
  double reach = 0.0;
  double rev = 0.0;

  void validate() const;
  double apply(const RewardVector& r) const;
  bool operator==(const AuxMix&) const = default;
};

struct ScoringOptions {
  RewardWeights weights;
  TokenCounter counter = TokenCounter::whitespace();
  ParseMode mode = ParseMode::Lenient;
};

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t components = 0;
  std::size_t ers_nodes = 0;
  std::optional<std::size_t> shortest_path;
};

struct ScoreReport {
  RewardVector reward;
  GraphStats stats;
  std::vector<Diagnostic> diagnostics;
  // Parsing had to drop or repair something (any parse diagnostic).
  bool degraded = false;
  // Strict mode rejected the text; reward is all zeros.
  bool rejected = false;
};

RewardVector score_graph(const Trace& trace, const ReasoningGraph& graph,
                         const ScoringOptions& options);

// Parse, build, and score one rollout. Never throws on any input text.
ScoreReport score_text(std::string_view text, const ScoringOptions& options);

}  // namespace grp
