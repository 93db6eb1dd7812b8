#include <algorithm>
#include <charconv>
#include <string>
#include <unordered_set>

#include "grp/trace.hpp"
#include "text_util.hpp"

namespace grp {

std::string_view to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
    return d.severity == Severity::Error;
  });
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Known: return "known";
    case Label::Generate: return "generate";
    case Label::Aggregate: return "aggregate";
    case Label::Reflect: return "reflect";
    case Label::Refine: return "refine";
    case Label::Reverse: return "reverse";
    case Label::Associate: return "associate";
    case Label::Answer: return "answer";
  }
  return "?";
}

std::optional<Label> label_from_string(std::string_view name) {
  for (Label l : kAllLabels) {
    if (to_string(l) == name) return l;
  }
  return std::nullopt;
}

std::string_view to_string(ParseMode mode) {
  return mode == ParseMode::Strict ? "strict" : "lenient";
}

std::optional<ParseMode> parse_mode_from_string(std::string_view name) {
  if (name == "strict") return ParseMode::Strict;
  if (name == "lenient") return ParseMode::Lenient;
  return std::nullopt;
}

std::size_t Trace::node_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.nodes.size();
  return n;
}

namespace {

using detail::Tag;

std::optional<NodeId> parse_id(std::string_view s) {
  if (s.empty()) return std::nullopt;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  NodeId value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value == 0) {
    return std::nullopt;
  }
  return value;
}

class Parser {
 public:
  Parser(std::string_view src, ParseMode mode) : src_(src), mode_(mode) {}

  ParseResult run() {
    if (const auto bad = detail::first_invalid_utf8(src_)) {
      report(diag::kInvalidUtf8, {*bad, *bad + 1},
             "input is not valid UTF-8 at byte " + std::to_string(*bad));
    }

    std::size_t pos = 0;
    std::size_t text_begin = 0;
    while (pos < src_.size()) {
      const std::size_t lt = src_.find('<', pos);
      if (lt == std::string_view::npos) break;
      auto tag = detail::lex_tag(src_, lt);
      if (!tag) {
        pos = lt + 1;
        continue;
      }
      flush_text(text_begin, lt);
      pos = handle_tag(*tag);
      text_begin = pos;
    }
    flush_text(text_begin, src_.size());

    if (open_) {
      report(diag::kUnclosedTag, open_->open_span,
             "<" + std::string(to_string(open_->block.label)) +
                 "> is never closed");
      finish_block(src_.size());
    }

    resolve_unresolved_parents();

    if (trace_.blocks.empty()) {
      report(diag::kEmptyTrace, {0, src_.size()},
             "no reasoning blocks found");
    }

    std::stable_sort(result_.diagnostics.begin(), result_.diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) {
                       return a.span.begin < b.span.begin;
                     });
    if (mode_ == ParseMode::Lenient || !has_errors(result_.diagnostics)) {
      result_.trace = std::move(trace_);
    }
    return std::move(result_);
  }

 private:
  struct OpenBlock {
    TagBlock block;
    ByteSpan open_span;
  };

  struct Unresolved {
    NodeId child;
    NodeId parent;
    ByteSpan span;
  };

  void report(std::string_view code, ByteSpan span, std::string message,
              std::optional<NodeId> node = std::nullopt) {
    Diagnostic d;
    d.severity =
        mode_ == ParseMode::Strict ? Severity::Error : Severity::Warning;
    d.code = std::string(code);
    d.node_id = node;
    d.message = std::move(message);
    d.span = span;
    result_.diagnostics.push_back(std::move(d));
  }

  void flush_text(std::size_t begin, std::size_t end) {
    if (begin >= end) return;
    const ByteSpan t = detail::trim_ascii(src_.substr(begin, end - begin));
    if (t.begin == t.end) return;
    report(diag::kStrayText, {begin + t.begin, begin + t.end},
           open_ ? "text between nodes is not part of any node"
                 : "text outside reasoning blocks");
  }

  // Returns the position after everything the tag consumed.
  std::size_t handle_tag(const Tag& tag) {
    if (tag.name == "node") {
      if (tag.closing) {
        report(diag::kUnexpectedClose, tag.span,
               "</node> without a matching <node>");
        return tag.span.end;
      }
      return handle_node(tag);
    }

    const auto label = label_from_string(tag.name);
    if (!label) {
      report(diag::kUnknownTag, tag.span,
             "unknown tag <" + std::string(tag.closing ? "/" : "") +
                 std::string(tag.name) + ">");
      return tag.span.end;
    }

    if (tag.closing) {
      if (!open_) {
        report(diag::kUnexpectedClose, tag.span,
               "</" + std::string(tag.name) + "> without an open block");
      } else {
        if (open_->block.label != *label) {
          report(diag::kMismatchedClose, tag.span,
                 "</" + std::string(tag.name) + "> closes <" +
                     std::string(to_string(open_->block.label)) + ">");
        }
        finish_block(tag.span.end);
      }
      return tag.span.end;
    }

    for (const auto& attr : tag.attributes) {
      report(diag::kUnknownAttribute, attr.span,
             "block tags take no attributes");
    }
    if (open_) {
      report(diag::kUnclosedTag, open_->open_span,
             "<" + std::string(to_string(open_->block.label)) +
                 "> is not closed before <" + std::string(tag.name) + ">");
      finish_block(tag.span.begin);
    }
    open_ = OpenBlock{TagBlock{*label, {}}, tag.span};
    return tag.span.end;
  }

  std::size_t handle_node(const Tag& tag) {
    // Content runs to </node>; a structural tag before it means the node was
    // never closed.
    const std::size_t content_begin = tag.span.end;
    std::size_t content_end = src_.size();
    std::size_t next = src_.size();
    bool closed = false;
    for (std::size_t q = content_begin; q < src_.size();) {
      const std::size_t lt = src_.find('<', q);
      if (lt == std::string_view::npos) break;
      const auto inner = detail::lex_tag(src_, lt);
      if (inner && inner->closing && inner->name == "node") {
        content_end = lt;
        next = inner->span.end;
        closed = true;
        break;
      }
      if (inner && detail::is_structural(*inner)) {
        content_end = lt;
        next = lt;
        break;
      }
      q = lt + 1;
    }
    const ByteSpan node_span{tag.span.begin, closed ? next : content_end};
    if (!closed) {
      report(diag::kUnclosedTag, tag.span, "<node> is never closed");
    }

    if (!open_) {
      report(diag::kOrphanNode, node_span,
             "<node> outside any reasoning block");
      return next;
    }

    std::optional<std::string_view> id_attr;
    const detail::Attribute* parents_attr = nullptr;
    for (const auto& attr : tag.attributes) {
      if (attr.name == "id" && !id_attr) {
        id_attr = attr.value;
      } else if (attr.name == "parents" && !parents_attr) {
        parents_attr = &attr;
      } else {
        report(diag::kUnknownAttribute, attr.span,
               "unexpected attribute '" + std::string(attr.name) + "'");
      }
    }

    if (!id_attr) {
      report(diag::kMissingAttribute, tag.span, "<node> has no id attribute");
      return next;
    }
    const auto id = parse_id(*id_attr);
    if (!id) {
      report(diag::kBadId, tag.span,
             "node id must be a positive integer, got '" +
                 std::string(*id_attr) + "'");
      return next;
    }
    if (seen_.count(*id)) {
      report(diag::kDuplicateId, tag.span,
             "node id " + std::to_string(*id) + " is already declared", *id);
      return next;
    }

    ReasoningNode node;
    node.id = *id;
    if (!parents_attr) {
      report(diag::kMissingAttribute, tag.span,
             "node " + std::to_string(*id) + " has no parents attribute",
             *id);
    } else {
      read_parents(node, *parents_attr);
    }

    const std::string_view raw =
        src_.substr(content_begin, content_end - content_begin);
    // The input-level diagnostic already covers bad bytes; the lenient
    // trace still has to be valid UTF-8.
    node.content = detail::repair_utf8(detail::trimmed(raw));
    if (node.content.empty()) {
      report(diag::kEmptyContent, node_span,
             "node " + std::to_string(*id) + " has no content", *id);
    }

    seen_.insert(node.id);
    result_.node_spans[node.id] = node_span;
    open_->block.nodes.push_back(std::move(node));
    return next;
  }

  void read_parents(ReasoningNode& node, const detail::Attribute& attr) {
    const std::string_view value = attr.value;
    if (detail::trimmed(value).empty()) return;

    std::size_t start = 0;
    while (start <= value.size()) {
      std::size_t comma = value.find(',', start);
      if (comma == std::string_view::npos) comma = value.size();
      const std::string_view item = detail::trimmed(
          value.substr(start, comma - start));
      const ByteSpan span{attr.value_span.begin + start,
                          attr.value_span.begin + comma};
      start = comma + 1;

      const auto parent = parse_id(item);
      if (!parent) {
        report(diag::kBadParents, span,
               "parent entry '" + std::string(item) +
                   "' is not a positive integer",
               node.id);
        continue;
      }
      if (*parent == node.id) {
        report(diag::kSelfParent, span,
               "node " + std::to_string(node.id) + " lists itself as parent",
               node.id);
        continue;
      }
      if (std::find(node.parents.begin(), node.parents.end(), *parent) !=
          node.parents.end()) {
        report(diag::kDuplicateParent, span,
               "parent " + std::to_string(*parent) + " listed twice",
               node.id);
        continue;
      }
      if (!seen_.count(*parent)) {
        unresolved_.push_back({node.id, *parent, span});
        continue;
      }
      node.parents.push_back(*parent);
    }
  }

  void finish_block(std::size_t end) {
    OpenBlock ob = std::move(*open_);
    open_.reset();
    const Label label = ob.block.label;
    if (ob.block.nodes.empty()) {
      report(diag::kEmptyBlock, {ob.open_span.begin, end},
             "<" + std::string(to_string(label)) + "> wraps no nodes");
      return;
    }
    if (label == Label::Answer) {
      ++answer_blocks_;
      if (answer_blocks_ > 1) {
        report(diag::kMultipleAnswers, ob.open_span,
               "more than one <answer> block; the last one is used");
      }
      if (ob.block.nodes.size() > 1) {
        report(diag::kAnswerArity, ob.open_span,
               "<answer> must wrap exactly one node");
      }
      trace_.answer_node_id = ob.block.nodes.back().id;
    }
    trace_.blocks.push_back(std::move(ob.block));
    result_.block_spans.push_back({ob.open_span.begin, end});
  }

  void resolve_unresolved_parents() {
    for (const auto& u : unresolved_) {
      if (seen_.count(u.parent)) {
        report(diag::kForwardParent, u.span,
               "node " + std::to_string(u.child) + " cites node " +
                   std::to_string(u.parent) + " before it is declared",
               u.child);
      } else {
        report(diag::kDanglingParent, u.span,
               "node " + std::to_string(u.child) + " cites unknown node " +
                   std::to_string(u.parent),
               u.child);
      }
    }
  }

  std::string_view src_;
  ParseMode mode_;
  ParseResult result_;
  Trace trace_;
  std::optional<OpenBlock> open_;
  std::unordered_set<NodeId> seen_;
  std::vector<Unresolved> unresolved_;
  int answer_blocks_ = 0;
};

}  // namespace

ParseResult parse_trace(std::string_view text, ParseMode mode) {
  return Parser(text, mode).run();
}

bool is_representable_content(std::string_view content) {
  if (content.empty()) return false;
  const ByteSpan t = detail::trim_ascii(content);
  if (t.begin != 0 || t.end != content.size()) return false;
  if (detail::first_invalid_utf8(content)) return false;
  // No tag can straddle into the closing </node> ('<' and '/' end names and
  // attributes), so lexing the content alone matches what the parser sees.
  for (std::size_t q = 0; q < content.size();) {
    const std::size_t lt = content.find('<', q);
    if (lt == std::string_view::npos) break;
    const auto tag = detail::lex_tag(content, lt);
    if (tag && detail::is_structural(*tag)) return false;
    q = lt + 1;
  }
  return true;
}

}  // namespace grp
