#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "grp/diagnostic.hpp"

namespace grp {

// The seven step-level cognitive labels plus the distinguished answer block.
enum class Label {
  Known,
  Generate,
  Aggregate,
  Reflect,
  Refine,
  Reverse,
  Associate,
  Answer,
};

inline constexpr Label kAllLabels[] = {
    Label::Known,   Label::Generate, Label::Aggregate, Label::Reflect,
    Label::Refine,  Label::Reverse,  Label::Associate, Label::Answer,
};

std::string_view to_string(Label label);
std::optional<Label> label_from_string(std::string_view name);
inline bool is_cognitive(Label label) { return label != Label::Answer; }

struct ReasoningNode {
  NodeId id = 0;
  std::vector<NodeId> parents;
  std::string content;

  bool operator==(const ReasoningNode&) const = default;
};

struct TagBlock {
  Label label = Label::Known;
  std::vector<ReasoningNode> nodes;

  bool operator==(const TagBlock&) const = default;
};

struct Trace {
  std::vector<TagBlock> blocks;
  std::optional<NodeId> answer_node_id;

  std::size_t node_count() const;
  bool operator==(const Trace&) const = default;
};

enum class ParseMode { Strict, Lenient };

std::string_view to_string(ParseMode mode);
std::optional<ParseMode> parse_mode_from_string(std::string_view name);

struct ParseResult {
  // Present in lenient mode always; in strict mode only when no errors.
  std::optional<Trace> trace;
  std::vector<Diagnostic> diagnostics;
  // Source spans of accepted nodes and blocks (blocks indexed like
  // trace->blocks). Used by the linter.
  std::unordered_map<NodeId, ByteSpan> node_spans;
  std::vector<ByteSpan> block_spans;
};

// Parses the tag grammar:
//
//   <label>
//   <node id="1" parents="">content</node>
//   </label>
//
// Lenient mode never fails: malformed pieces are dropped and reported as
// warnings. Strict mode reports the same problems as errors.
ParseResult parse_trace(std::string_view text, ParseMode mode);

// Canonical form: one tag per line, attributes in `id`, `parents` order, LF
// line endings. Throws grp::Error(InvalidTrace) if the trace breaks an
// invariant (see check_trace).
std::string serialize_trace(const Trace& trace);

// Invariant checks for a Trace value built outside the parser (e.g. from the
// JSON mirror). Returns one error diagnostic per broken invariant; spans are
// empty because there is no source text.
std::vector<Diagnostic> check_trace(const Trace& trace);

// Lenient parse diagnostics plus style warnings (answer-not-last,
// dead-end-node, missing-answer). Never throws.
std::vector<Diagnostic> lint_trace(std::string_view text);

// Style warnings only, for an already parsed result.
std::vector<Diagnostic> style_diagnostics(const ParseResult& parsed);

// True when `content` can be emitted inside <node>...</node> and read back
// unchanged.
bool is_representable_content(std::string_view content);

}  // namespace grp
