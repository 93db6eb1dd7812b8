#include "grp/qc.hpp"

#include <algorithm>
#include <unordered_set>

#include "grp/error.hpp"
#include "grp/graph.hpp"
#include "grp/rewards.hpp"

namespace grp {

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::Density: return "density";
    case ViolationCode::Topology: return "topology";
    case ViolationCode::Parallelism: return "parallelism";
    case ViolationCode::DanglingParent: return "dangling-parent";
    case ViolationCode::DuplicateId: return "duplicate-id";
    case ViolationCode::UnreachableAnswer: return "unreachable-answer";
    case ViolationCode::MissingAnswer: return "missing-answer";
    case ViolationCode::MultiAnswer: return "multi-answer";
  }
  return "?";
}

std::string_view to_string(SemanticCheck check) {
  return check == SemanticCheck::NodeLabel ? "node-label" : "parent-child";
}

bool QCReport::needs_refinement() const {
  return !passed ||
         std::any_of(semantic.begin(), semantic.end(),
                     [](const SemanticFinding& f) { return !f.verdict.passed; });
}

namespace {

std::string plural(std::size_t n, const char* one, const char* many) {
  return std::to_string(n) + " " + (n == 1 ? one : many);
}

void check_references(const Trace& trace, std::vector<Violation>& out) {
  std::unordered_set<NodeId> declared;
  for (const auto& block : trace.blocks) {
    for (const auto& node : block.nodes) {
      if (!declared.insert(node.id).second) {
        out.push_back({ViolationCode::DuplicateId,
                       {node.id},
                       "id " + std::to_string(node.id) +
                           " is declared more than once"});
        continue;
      }
      std::vector<NodeId> missing;
      for (NodeId p : node.parents) {
        if (p == node.id || !declared.count(p) ||
            std::count(node.parents.begin(), node.parents.end(), p) > 1) {
          if (std::find(missing.begin(), missing.end(), p) == missing.end()) {
            missing.push_back(p);
          }
        }
      }
      if (!missing.empty()) {
        std::string list;
        for (NodeId p : missing) {
          if (!list.empty()) list += ", ";
          list += std::to_string(p);
        }
        out.push_back({ViolationCode::DanglingParent,
                       {node.id},
                       "cites parent(s) " + list +
                           " that are not distinct earlier nodes"});
      }
    }
  }
}

}  // namespace

QCReport structural_check(const Trace& trace, std::string trace_id,
                          SemanticJudge* judge) {
  QCReport report;
  report.trace_id = std::move(trace_id);
  auto& out = report.violations;

  const ReasoningGraph graph = build_graph(trace);

  for (const auto& block : trace.blocks) {
    if ((block.label == Label::Aggregate || block.label == Label::Refine) &&
        block.nodes.size() != 1) {
      Violation v{ViolationCode::Density, {}, {}};
      for (const auto& n : block.nodes) v.node_ids.push_back(n.id);
      v.message = "<" + std::string(to_string(block.label)) + "> block wraps " +
                  plural(block.nodes.size(), "node", "nodes") +
                  " instead of exactly one";
      out.push_back(std::move(v));
    }
  }

  for (const auto& n : graph.nodes()) {
    const std::size_t k = n.parents.size();
    std::string want;
    bool ok = true;
    switch (n.label) {
      case Label::Known:
        ok = k == 0;
        want = "none";
        break;
      case Label::Aggregate:
        ok = k > 1;
        want = "two or more";
        break;
      case Label::Refine:
        ok = k == 1;
        want = "exactly one";
        break;
      default:
        break;
    }
    if (!ok) {
      out.push_back({ViolationCode::Topology,
                     {n.id},
                     std::string(to_string(n.label)) + " step has " +
                         plural(k, "parent", "parents") + ", expected " +
                         want});
    }
  }

  for (std::size_t b = 0; b < trace.blocks.size(); ++b) {
    if (!is_cognitive(trace.blocks[b].label)) continue;
    std::vector<NodeId> involved;
    for (const auto& n : graph.nodes()) {
      if (n.block != b) continue;
      for (std::size_t p : n.parents) {
        const GraphNode& parent = graph.node(p);
        if (parent.block != b) continue;
        for (NodeId id : {parent.id, n.id}) {
          if (std::find(involved.begin(), involved.end(), id) ==
              involved.end()) {
            involved.push_back(id);
          }
        }
      }
    }
    if (!involved.empty()) {
      out.push_back({ViolationCode::Parallelism, involved,
                     "<" + std::string(to_string(trace.blocks[b].label)) +
                         "> block contains a parent-child pair"});
    }
  }

  check_references(trace, out);

  std::vector<NodeId> answer_nodes;
  std::size_t answer_blocks = 0;
  for (const auto& block : trace.blocks) {
    if (block.label != Label::Answer) continue;
    ++answer_blocks;
    for (const auto& n : block.nodes) answer_nodes.push_back(n.id);
  }
  if (answer_blocks == 0) {
    out.push_back({ViolationCode::MissingAnswer, {},
                   "there is no <answer> block"});
  } else if (answer_blocks > 1) {
    out.push_back({ViolationCode::MultiAnswer, answer_nodes,
                   plural(answer_blocks, "answer block", "answer blocks") +
                       " found, expected one"});
  }
  if (const auto answer = graph.answer_id();
      answer && reward_reachability(graph) == 0.0) {
    out.push_back({ViolationCode::UnreachableAnswer,
                   {*answer},
                   "no path leads from a premise to the answer"});
  }

  if (judge) {
    for (const auto& n : graph.nodes()) {
      report.semantic.push_back(
          {n.id, SemanticCheck::NodeLabel, judge->node_label(n.content, n.label)});
      if (n.parents.empty()) continue;
      std::vector<std::string_view> parents;
      for (std::size_t p : n.parents) parents.push_back(graph.node(p).content);
      report.semantic.push_back(
          {n.id, SemanticCheck::ParentChild,
           judge->parent_child(n.content, n.label, parents)});
    }
  }

  report.passed = out.empty();
  return report;
}

namespace {

std::string_view rule_for(ViolationCode code) {
  switch (code) {
    case ViolationCode::Density:
      return "each aggregate or refine tag wraps exactly one node";
    case ViolationCode::Topology:
      return "known nodes have no parents, aggregate nodes combine at least "
             "two parents, refine nodes extend exactly one parent";
    case ViolationCode::Parallelism:
      return "nodes inside one tag are parallel and must not cite each other";
    case ViolationCode::DanglingParent:
      return "parents must be distinct nodes declared earlier";
    case ViolationCode::DuplicateId:
      return "every node id is unique";
    case ViolationCode::UnreachableAnswer:
      return "the answer must be derived from the premises through parent "
             "links";
    case ViolationCode::MissingAnswer:
    case ViolationCode::MultiAnswer:
      return "the graph ends with exactly one <answer> block";
  }
  return "";
}

std::string subject(const std::vector<NodeId>& ids) {
  if (ids.empty()) return "graph";
  std::string s = ids.size() == 1 ? "node " : "nodes ";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(ids[i]);
  }
  return s;
}

}  // namespace

std::string refinement_feedback(const QCReport& report) {
  std::vector<std::string> items;
  for (const auto& v : report.violations) {
    items.push_back("[" + std::string(to_string(v.code)) + "] " +
                    subject(v.node_ids) + ": " + v.message + ". Rule: " +
                    std::string(rule_for(v.code)) + ".");
  }
  for (const auto& f : report.semantic) {
    if (f.verdict.passed) continue;
    items.push_back("[" + std::string(to_string(f.check)) + "] " +
                    subject({f.node_id}) + ": " + f.verdict.reason);
  }
  if (items.empty()) {
    throw Error(ErrorKind::InvalidArgument,
                "refinement_feedback: report has nothing to fix");
  }
  std::string out = "The reasoning graph failed " +
                    plural(items.size(), "check", "checks") +
                    ". Fix every item below and emit the complete graph "
                    "again.\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += std::to_string(i + 1) + ". " + items[i] + "\n";
  }
  return out;
}

RefinementOutcome refine_until_clean(std::string text, Translator& translator,
                                     unsigned max_attempts,
                                     SemanticJudge* judge) {
  const auto check = [&](const std::string& t) {
    ParseResult parsed = parse_trace(t, ParseMode::Lenient);
    QCReport r = structural_check(*parsed.trace, {}, judge);
    r.parse_diagnostics = std::move(parsed.diagnostics);
    return r;
  };

  RefinementOutcome outcome;
  outcome.report = check(text);
  while (outcome.report.needs_refinement() &&
         outcome.attempts < max_attempts) {
    const std::string feedback = refinement_feedback(outcome.report);
    text = translator.retranslate(text, feedback);
    ++outcome.attempts;
    outcome.report = check(text);
  }
  outcome.text = std::move(text);
  outcome.passed = !outcome.report.needs_refinement();
  return outcome;
}

QCSummary::QCSummary() {
  for (ViolationCode c : kAllViolationCodes) {
    violations[std::string(to_string(c))] = 0;
  }
}

double QCSummary::pass_rate() const {
  return records == 0 ? 0.0
                      : static_cast<double>(passed) /
                            static_cast<double>(records);
}

void QCSummary::add(const QCReport& report) {
  ++records;
  if (report.passed) ++passed;
  for (const auto& v : report.violations) {
    ++violations[std::string(to_string(v.code))];
  }
}

}  // namespace grp
