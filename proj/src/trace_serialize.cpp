#include <algorithm>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "grp/error.hpp"
#include "grp/trace.hpp"

namespace grp {

namespace {

Diagnostic invariant_error(std::string_view code, std::string message,
                           std::optional<NodeId> node = std::nullopt) {
  Diagnostic d;
  d.severity = Severity::Error;
  d.code = std::string(code);
  d.node_id = node;
  d.message = std::move(message);
  return d;
}

Diagnostic style_warning(std::string_view code, ByteSpan span,
                         std::string message,
                         std::optional<NodeId> node = std::nullopt) {
  Diagnostic d;
  d.severity = Severity::Warning;
  d.code = std::string(code);
  d.node_id = node;
  d.message = std::move(message);
  d.span = span;
  return d;
}

}  // namespace

std::vector<Diagnostic> check_trace(const Trace& trace) {
  std::vector<Diagnostic> out;
  if (trace.blocks.empty()) {
    out.push_back(invariant_error(diag::kEmptyTrace, "trace has no blocks"));
  }

  std::unordered_map<NodeId, std::size_t> order;  // id -> declaration index
  std::size_t index = 0;
  for (const auto& block : trace.blocks) {
    for (const auto& node : block.nodes) {
      if (node.id != 0 && !order.count(node.id)) order[node.id] = index;
      ++index;
    }
  }

  std::unordered_set<NodeId> declared;
  const TagBlock* answer_block = nullptr;
  int answer_blocks = 0;
  for (const auto& block : trace.blocks) {
    const std::string label(to_string(block.label));
    if (block.nodes.empty()) {
      out.push_back(
          invariant_error(diag::kEmptyBlock, "<" + label + "> has no nodes"));
    }
    if (block.label == Label::Answer) {
      ++answer_blocks;
      answer_block = &block;
      if (block.nodes.size() > 1) {
        out.push_back(invariant_error(diag::kAnswerArity,
                                      "<answer> must wrap exactly one node"));
      }
    }
    for (const auto& node : block.nodes) {
      const std::string sid = std::to_string(node.id);
      if (node.id == 0) {
        out.push_back(invariant_error(diag::kBadId, "node id 0 is invalid"));
        continue;
      }
      if (declared.count(node.id)) {
        out.push_back(invariant_error(diag::kDuplicateId,
                                      "node id " + sid + " is repeated",
                                      node.id));
        continue;
      }
      std::unordered_set<NodeId> listed;
      for (NodeId p : node.parents) {
        const std::string sp = std::to_string(p);
        if (p == node.id) {
          out.push_back(invariant_error(
              diag::kSelfParent, "node " + sid + " lists itself", node.id));
        } else if (!listed.insert(p).second) {
          out.push_back(invariant_error(diag::kDuplicateParent,
                                        "node " + sid + " lists parent " +
                                            sp + " twice",
                                        node.id));
        } else if (!declared.count(p)) {
          out.push_back(invariant_error(
              order.count(p) ? diag::kForwardParent : diag::kDanglingParent,
              "node " + sid + " cites node " + sp +
                  " which is not declared before it",
              node.id));
        }
      }
      if (node.content.empty()) {
        out.push_back(invariant_error(diag::kEmptyContent,
                                      "node " + sid + " has no content",
                                      node.id));
      } else if (!is_representable_content(node.content)) {
        out.push_back(invariant_error(
            diag::kUnrepresentableContent,
            "node " + sid +
                " content has surrounding whitespace, invalid UTF-8, or an "
                "embedded node/block tag",
            node.id));
      }
      declared.insert(node.id);
    }
  }

  if (answer_blocks > 1) {
    out.push_back(invariant_error(diag::kMultipleAnswers,
                                  "more than one <answer> block"));
  }
  const std::optional<NodeId> expected =
      answer_block && !answer_block->nodes.empty()
          ? std::optional<NodeId>(answer_block->nodes.back().id)
          : std::nullopt;
  if (trace.answer_node_id != expected) {
    out.push_back(invariant_error(
        diag::kAnswerMismatch,
        "answer_node_id does not name the node in the <answer> block"));
  }
  return out;
}

std::string serialize_trace(const Trace& trace) {
  const auto problems = check_trace(trace);
  if (!problems.empty()) {
    throw Error(ErrorKind::InvalidTrace,
                "cannot serialize trace: " + problems.front().message);
  }
  std::string out;
  for (const auto& block : trace.blocks) {
    const std::string_view label = to_string(block.label);
    out += '<';
    out += label;
    out += ">\n";
    for (const auto& node : block.nodes) {
      out += "<node id=\"";
      out += std::to_string(node.id);
      out += "\" parents=\"";
      for (std::size_t i = 0; i < node.parents.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(node.parents[i]);
      }
      out += "\">";
      out += node.content;
      out += "</node>\n";
    }
    out += "</";
    out += label;
    out += ">\n";
  }
  return out;
}

std::vector<Diagnostic> style_diagnostics(const ParseResult& parsed) {
  std::vector<Diagnostic> out;
  if (!parsed.trace) return out;
  const Trace& trace = *parsed.trace;

  const auto span_of = [&](NodeId id) {
    const auto it = parsed.node_spans.find(id);
    return it == parsed.node_spans.end() ? ByteSpan{} : it->second;
  };

  for (std::size_t i = 0; i + 1 < trace.blocks.size(); ++i) {
    if (trace.blocks[i].label == Label::Answer) {
      const ByteSpan span =
          i < parsed.block_spans.size() ? parsed.block_spans[i] : ByteSpan{};
      out.push_back(style_warning(diag::kAnswerNotLast, span,
                                  "<answer> is followed by further blocks"));
    }
  }

  if (!trace.answer_node_id) {
    if (trace.node_count() > 0) {
      out.push_back(style_warning(diag::kMissingAnswer,
                                  {0, 0},
                                  "trace has no <answer> block"));
    }
  } else {
    std::unordered_set<NodeId> has_children;
    for (const auto& block : trace.blocks) {
      for (const auto& node : block.nodes) {
        has_children.insert(node.parents.begin(), node.parents.end());
      }
    }
    for (const auto& block : trace.blocks) {
      for (const auto& node : block.nodes) {
        if (node.id == *trace.answer_node_id || has_children.count(node.id)) {
          continue;
        }
        out.push_back(style_warning(
            diag::kDeadEndNode, span_of(node.id),
            "node " + std::to_string(node.id) +
                " has no children and is not the answer",
            node.id));
      }
    }
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return a.span.begin < b.span.begin;
                   });
  return out;
}

std::vector<Diagnostic> lint_trace(std::string_view text) {
  ParseResult parsed = parse_trace(text, ParseMode::Lenient);
  std::vector<Diagnostic> out = std::move(parsed.diagnostics);
  auto style = style_diagnostics(parsed);
  out.insert(out.end(), std::make_move_iterator(style.begin()),
             std::make_move_iterator(style.end()));
  return out;
}

}  // namespace grp
