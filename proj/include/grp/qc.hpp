#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grp/diagnostic.hpp"
#include "grp/trace.hpp"

namespace grp {

enum class ViolationCode {
  Density,
  Topology,
  Parallelism,
  DanglingParent,
  DuplicateId,
  UnreachableAnswer,
  MissingAnswer,
  MultiAnswer,
};

inline constexpr ViolationCode kAllViolationCodes[] = {
    ViolationCode::Density,         ViolationCode::Topology,
    ViolationCode::Parallelism,     ViolationCode::DanglingParent,
    ViolationCode::DuplicateId,     ViolationCode::UnreachableAnswer,
    ViolationCode::MissingAnswer,   ViolationCode::MultiAnswer,
};

std::string_view to_string(ViolationCode code);

struct Violation {
  ViolationCode code = ViolationCode::Density;
  std::vector<NodeId> node_ids;
  std::string message;
};

enum class SemanticCheck { NodeLabel, ParentChild };

std::string_view to_string(SemanticCheck check);

struct JudgeVerdict {
  bool passed = true;
  std::string reason;
};

struct SemanticFinding {
  NodeId node_id = 0;
  SemanticCheck check = SemanticCheck::NodeLabel;
  JudgeVerdict verdict;
};

// Meaning-level checks that structure alone cannot decide: does a node's
// content fit its label, and does it follow from its parents. No model
// client ships; callers plug one in.
class SemanticJudge {
 public:
  virtual ~SemanticJudge() = default;
  virtual JudgeVerdict node_label(std::string_view content, Label label) = 0;
  virtual JudgeVerdict parent_child(
      std::string_view content, Label label,
      const std::vector<std::string_view>& parent_contents) = 0;
};

// Accepts everything.
class PassThroughJudge final : public SemanticJudge {
 public:
  JudgeVerdict node_label(std::string_view, Label) override { return {}; }
  JudgeVerdict parent_child(std::string_view, Label,
                            const std::vector<std::string_view>&) override {
    return {};
  }
};

struct QCReport {
  std::string trace_id;
  std::vector<Violation> violations;
  std::vector<SemanticFinding> semantic;  // judge output, verbatim
  std::vector<Diagnostic> parse_diagnostics;
  bool passed = false;  // no structural violations

  bool needs_refinement() const;
};

// Structural verification of one trace. A trace passes iff its format
// sub-scores are all 1, it has exactly one answer block, and the answer is
// reachable. Traces that still carry dangling parents or repeated ids (only
// possible when built outside the parser) also fail. When a judge is given,
// it runs on every node and its verdicts are recorded.
QCReport structural_check(const Trace& trace, std::string trace_id = {},
                          SemanticJudge* judge = nullptr);

// Numbered, deterministic list of what to fix, one item per violation (and
// per failed semantic finding), for a re-translation prompt. Throws
// grp::Error(InvalidArgument) if the report has nothing to fix.
std::string refinement_feedback(const QCReport& report);

// Produces a new trace text from the previous one and the feedback.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::string retranslate(std::string_view previous_text,
                                  std::string_view feedback) = 0;
};

struct RefinementOutcome {
  std::string text;
  QCReport report;
  unsigned attempts = 0;  // re-translations performed
  bool passed = false;
};

// Check, and while the trace needs refinement and attempts remain, feed the
// feedback to the translator and check again.
RefinementOutcome refine_until_clean(std::string text, Translator& translator,
                                     unsigned max_attempts,
                                     SemanticJudge* judge = nullptr);

struct QCSummary {
  QCSummary();

  std::size_t records = 0;
  std::size_t passed = 0;
  std::map<std::string, std::size_t> violations;  // every code, zero or not

  double pass_rate() const;
  void add(const QCReport& report);
};

}  // namespace grp
