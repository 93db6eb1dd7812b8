#include "grp/rewards.hpp"

#include <algorithm>
#include <cmath>

#include "grp/error.hpp"
#include "text_util.hpp"

namespace grp {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

void check_convex(const char* what, std::initializer_list<double> ws) {
  double sum = 0.0;
  for (double w : ws) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw Error(ErrorKind::InvalidConfig,
                  std::string(what) + ": every weight must lie in [0, 1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw Error(ErrorKind::InvalidConfig,
                std::string(what) + ": weights must sum to 1 (got " +
                    std::to_string(sum) + ")");
  }
}

double ratio_or(std::size_t num, std::size_t den, double vacuous) {
  return den == 0 ? vacuous
                  : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void RewardWeights::validate() const {
  check_convex("reward weights", {fmt, conn, ers, reach, rev});
}

void AuxMix::validate() const {
  check_convex("aux mix", {graph, fmt, conn, ers, reach, rev});
}

double AuxMix::apply(const RewardVector& r) const {
  const double v = graph * r.total + fmt * r.fmt.total + conn * r.conn +
                   ers * r.ers + reach * r.reach + rev * r.rev;
  return std::clamp(v, 0.0, 1.0);
}

std::size_t count_whitespace_tokens(std::string_view text) {
  std::size_t tokens = 0;
  bool in_token = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t len = 1;
    const auto cp = detail::decode_utf8(text, pos, len);
    const bool space = cp && detail::is_unicode_space(*cp);
    if (!space && !in_token) ++tokens;
    in_token = !space;
    pos += len;
  }
  return tokens;
}

std::size_t count_codepoint_tokens(std::string_view text) {
  std::size_t tokens = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t len = 1;
    const auto cp = detail::decode_utf8(text, pos, len);
    if (!(cp && detail::is_unicode_space(*cp))) ++tokens;
    pos += len;
  }
  return tokens;
}

TokenCounter TokenCounter::whitespace() {
  return TokenCounter("whitespace", count_whitespace_tokens);
}

TokenCounter TokenCounter::codepoints() {
  return TokenCounter("codepoint", count_codepoint_tokens);
}

TokenCounter TokenCounter::by_name(std::string_view name) {
  if (name == "whitespace") return whitespace();
  if (name == "codepoint") return codepoints();
  throw Error(ErrorKind::InvalidConfig,
              "unknown token counter '" + std::string(name) +
                  "' (expected whitespace or codepoint)");
}

FormatScores reward_format(const Trace& trace, const ReasoningGraph& graph) {
  FormatScores s;
  if (graph.empty()) return s;

  std::size_t dens_den = 0;
  std::size_t dens_num = 0;
  std::size_t para_den = 0;
  for (const auto& block : trace.blocks) {
    if (block.label == Label::Aggregate || block.label == Label::Refine) {
      ++dens_den;
      if (block.nodes.size() == 1) ++dens_num;
    }
    if (is_cognitive(block.label)) ++para_den;
  }

  std::size_t topo_den = 0;
  std::size_t topo_num = 0;
  std::vector<bool> block_has_inner_edge(trace.blocks.size(), false);
  for (const auto& n : graph.nodes()) {
    const std::size_t parents = n.parents.size();
    switch (n.label) {
      case Label::Known:
        ++topo_den;
        topo_num += parents == 0;
        break;
      case Label::Aggregate:
        ++topo_den;
        topo_num += parents > 1;
        break;
      case Label::Refine:
        ++topo_den;
        topo_num += parents == 1;
        break;
      default:
        break;
    }
    for (std::size_t p : n.parents) {
      if (graph.node(p).block == n.block && n.block < block_has_inner_edge.size()) {
        block_has_inner_edge[n.block] = true;
      }
    }
  }
  std::size_t para_num = 0;
  for (std::size_t b = 0; b < trace.blocks.size(); ++b) {
    if (is_cognitive(trace.blocks[b].label) && !block_has_inner_edge[b]) {
      ++para_num;
    }
  }

  s.dens = ratio_or(dens_num, dens_den, 1.0);
  s.topo = ratio_or(topo_num, topo_den, 1.0);
  s.para = ratio_or(para_num, para_den, 1.0);
  s.total = (s.dens + s.topo + s.para) / 3.0;
  return s;
}

double reward_connectivity(const ReasoningGraph& graph) {
  if (graph.empty()) return 0.0;
  return 1.0 / static_cast<double>(component_count(graph));
}

double reward_ers_ratio(const ReasoningGraph& graph,
                        const TokenCounter& counter) {
  if (graph.empty() || !graph.answer_index()) return 0.0;
  const NodeSet ers = extract_ers(graph);
  std::size_t total = 0;
  std::size_t effective = 0;
  for (const auto& n : graph.nodes()) {
    const std::size_t t = counter(n.content);
    total += t;
    if (ers.contains(n.id)) effective += t;
  }
  return ratio_or(effective, total, 0.0);
}

double reward_reachability(const ReasoningGraph& graph) {
  const auto answer = graph.answer_id();
  if (!answer) return 0.0;
  return reachable_from_start(graph).contains(*answer) ? 1.0 : 0.0;
}

double reward_reverse_search(const ReasoningGraph& graph) {
  const auto answer = graph.answer_id();
  if (!answer || graph.empty()) return 0.0;
  return ratio_or(ancestors_of(graph, *answer).size(), graph.size(), 0.0);
}

RewardVector reward_total(const RewardComponents& c,
                          const RewardWeights& weights) {
  weights.validate();
  for (double v : {c.fmt.dens, c.fmt.topo, c.fmt.para, c.fmt.total, c.conn,
                   c.ers, c.reach, c.rev}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument,
                  "reward component outside [0, 1]: " + std::to_string(v));
    }
  }
  RewardVector r;
  r.fmt = c.fmt;
  r.conn = c.conn;
  r.ers = c.ers;
  r.reach = c.reach;
  r.rev = c.rev;
  // Dividing by the weight sum absorbs the 1e-9 slack allowed in validate(),
  // so all-ones components give exactly 1.
  const double wsum =
      weights.fmt + weights.conn + weights.ers + weights.reach + weights.rev;
  const double dot = weights.fmt * c.fmt.total + weights.conn * c.conn +
                     weights.ers * c.ers + weights.reach * c.reach +
                     weights.rev * c.rev;
  r.total = std::clamp(dot / wsum, 0.0, 1.0);
  return r;
}

RewardVector score_graph(const Trace& trace, const ReasoningGraph& graph,
                         const ScoringOptions& options) {
  RewardComponents c;
  c.fmt = reward_format(trace, graph);
  c.conn = reward_connectivity(graph);
  c.ers = reward_ers_ratio(graph, options.counter);
  c.reach = reward_reachability(graph);
  c.rev = reward_reverse_search(graph);
  return reward_total(c, options.weights);
}

ScoreReport score_text(std::string_view text, const ScoringOptions& options) {
  ScoreReport report;
  ParseResult parsed = parse_trace(text, options.mode);
  report.degraded = !parsed.diagnostics.empty();
  report.diagnostics = std::move(parsed.diagnostics);

  if (!parsed.trace) {
    report.rejected = true;
    report.reward = reward_total({}, options.weights);
    return report;
  }

  const ReasoningGraph graph = build_graph(*parsed.trace);
  if (graph.empty()) {
    Diagnostic d;
    d.severity = Severity::Warning;
    d.code = std::string(diag::kEmptyGraph);
    d.message = "no nodes to score; all rewards are 0";
    d.span = {0, text.size()};
    report.diagnostics.push_back(std::move(d));
    report.reward = reward_total({}, options.weights);
    return report;
  }

  report.reward = score_graph(*parsed.trace, graph, options);
  report.stats.nodes = graph.size();
  report.stats.edges = graph.edge_count();
  report.stats.components = component_count(graph);
  report.stats.ers_nodes = extract_ers(graph).size();
  report.stats.shortest_path = shortest_path_length(graph);
  return report;
}

}  // namespace grp
