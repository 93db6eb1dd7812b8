#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace grp {

using NodeId = std::uint64_t;

enum class Severity { Error, Warning };

std::string_view to_string(Severity s);

// Half-open byte range [begin, end) into the source text.
struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const ByteSpan&) const = default;
};

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::optional<NodeId> node_id;
  std::string message;
  ByteSpan span;

  bool operator==(const Diagnostic&) const = default;
};

bool has_errors(const std::vector<Diagnostic>& diags);

// Stable diagnostic codes. Parser codes are emitted with Error severity in
// strict mode and Warning severity in lenient mode; style codes are always
// warnings.
namespace diag {
// parser
inline constexpr std::string_view kInvalidUtf8 = "invalid-utf8";
inline constexpr std::string_view kUnknownTag = "unknown-tag";
inline constexpr std::string_view kDuplicateId = "duplicate-id";
inline constexpr std::string_view kDanglingParent = "dangling-parent";
inline constexpr std::string_view kForwardParent = "forward-parent";
inline constexpr std::string_view kSelfParent = "self-parent";
inline constexpr std::string_view kDuplicateParent = "duplicate-parent";
inline constexpr std::string_view kUnclosedTag = "unclosed-tag";
inline constexpr std::string_view kMismatchedClose = "mismatched-close";
inline constexpr std::string_view kUnexpectedClose = "unexpected-close";
inline constexpr std::string_view kEmptyContent = "empty-content";
inline constexpr std::string_view kEmptyBlock = "empty-block";
inline constexpr std::string_view kEmptyTrace = "empty-trace";
inline constexpr std::string_view kMultipleAnswers = "multiple-answers";
inline constexpr std::string_view kAnswerArity = "answer-arity";
inline constexpr std::string_view kStrayText = "stray-text";
inline constexpr std::string_view kOrphanNode = "orphan-node";
inline constexpr std::string_view kBadId = "bad-id";
inline constexpr std::string_view kBadParents = "bad-parents";
inline constexpr std::string_view kMissingAttribute = "missing-attribute";
inline constexpr std::string_view kUnknownAttribute = "unknown-attribute";
// Trace value invariants (check_trace)
inline constexpr std::string_view kUnrepresentableContent =
    "unrepresentable-content";
inline constexpr std::string_view kAnswerMismatch = "answer-mismatch";
// style (lint only)
inline constexpr std::string_view kAnswerNotLast = "answer-not-last";
inline constexpr std::string_view kDeadEndNode = "dead-end-node";
inline constexpr std::string_view kMissingAnswer = "missing-answer";
// scoring
inline constexpr std::string_view kEmptyGraph = "empty-graph";
}  // namespace diag

}  // namespace grp
