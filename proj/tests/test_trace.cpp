#include <doctest.h>

#include <string>

#include "grp/error.hpp"
#include "grp/trace.hpp"
#include "support/generators.hpp"
#include "support/helpers.hpp"

using namespace grp;
using grptest::count_code;
using grptest::has_code;

namespace {

const std::string kMinimal =
    "<known><node id=\"1\" parents=\"\">x=2</node></known>"
    "<answer><node id=\"2\" parents=\"1\">x=2</node></answer>";

ParseResult strict(std::string_view text) { return parse_trace(text, ParseMode::Strict); }
ParseResult lenient(std::string_view text) { return parse_trace(text, ParseMode::Lenient); }

}  // namespace

TEST_CASE("minimal trace parses cleanly") {
  const auto r = strict(kMinimal);
  REQUIRE(r.trace);
  CHECK(r.diagnostics.empty());
  CHECK(r.trace->node_count() == 2);
  CHECK(r.trace->answer_node_id == NodeId{2});
  REQUIRE(r.trace->blocks.size() == 2);
  CHECK(r.trace->blocks[0].label == Label::Known);
  CHECK(r.trace->blocks[1].nodes[0].parents == std::vector<NodeId>{1});
  CHECK(r.trace->blocks[1].nodes[0].content == "x=2");
}

TEST_CASE("dangling parent: strict error, lenient drops the edge") {
  std::string text = kMinimal;
  text.replace(text.find("parents=\"1\""), 11, "parents=\"3\"");
  const auto s = strict(text);
  CHECK_FALSE(s.trace);
  CHECK(has_code(s.diagnostics, diag::kDanglingParent));
  CHECK(has_errors(s.diagnostics));

  const auto l = lenient(text);
  REQUIRE(l.trace);
  CHECK(l.trace->node_count() == 2);
  CHECK(l.trace->blocks[1].nodes[0].parents.empty());
  CHECK(has_code(l.diagnostics, diag::kDanglingParent));
  CHECK(grptest::all_severity(l.diagnostics, Severity::Warning));
}

TEST_CASE("forward parent is an error in strict mode") {
  const std::string text =
      "<known><node id=\"1\" parents=\"2\">a</node>"
      "<node id=\"2\" parents=\"\">b</node></known>";
  const auto s = strict(text);
  CHECK_FALSE(s.trace);
  CHECK(has_code(s.diagnostics, diag::kForwardParent));
  const auto l = lenient(text);
  REQUIRE(l.trace);
  CHECK(l.trace->blocks[0].nodes[0].parents.empty());
}

TEST_CASE("strict mode rejects each malformation with its code") {
  struct Case {
    const char* text;
    std::string_view code;
  };
  const Case cases[] = {
      {"<known><node id=\"1\" parents=\"\">a</node></known> trailing", diag::kStrayText},
      {"<known><node id=\"1\" parents=\"\">a</node></known><think>x</think>",
       diag::kUnknownTag},
      {"<known><node id=\"1\" parents=\"\">a</node><node id=\"1\" parents=\"\">b</node></known>",
       diag::kDuplicateId},
      {"<known><node id=\"1\" parents=\"1\">a</node></known>", diag::kSelfParent},
      {"<known><node id=\"1\" parents=\"\">a</node></known>"
       "<refine><node id=\"2\" parents=\"1,1\">b</node></refine>",
       diag::kDuplicateParent},
      {"<known><node id=\"1\" parents=\"\">a</node>", diag::kUnclosedTag},
      {"<known><node id=\"1\" parents=\"\">a</known>", diag::kUnclosedTag},
      {"<known><node id=\"1\" parents=\"\">a</node></refine>", diag::kMismatchedClose},
      {"</known>", diag::kUnexpectedClose},
      {"<known><node id=\"1\" parents=\"\">   </node></known>", diag::kEmptyContent},
      {"<known></known><generate><node id=\"1\" parents=\"\">a</node></generate>",
       diag::kEmptyBlock},
      {"", diag::kEmptyTrace},
      {"<known><node id=\"1\" parents=\"\">a</node></known>"
       "<answer><node id=\"2\" parents=\"1\">b</node></answer>"
       "<answer><node id=\"3\" parents=\"1\">c</node></answer>",
       diag::kMultipleAnswers},
      {"<known><node id=\"1\" parents=\"\">a</node></known>"
       "<answer><node id=\"2\" parents=\"1\">b</node><node id=\"3\" parents=\"1\">c</node></answer>",
       diag::kAnswerArity},
      {"<node id=\"1\" parents=\"\">a</node>", diag::kOrphanNode},
      {"<known><node id=\"x\" parents=\"\">a</node></known>", diag::kBadId},
      {"<known><node id=\"0\" parents=\"\">a</node></known>", diag::kBadId},
      {"<known><node id=\"1\" parents=\"\">a</node></known>"
       "<refine><node id=\"2\" parents=\"1;\">b</node></refine>",
       diag::kBadParents},
      {"<known><node id=\"1\">a</node></known>", diag::kMissingAttribute},
      {"<known><node id=\"1\" parents=\"\" weight=\"2\">a</node></known>",
       diag::kUnknownAttribute},
      {"<known><node id=\"1\" parents=\"\">a\xff</node></known>", diag::kInvalidUtf8},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    const auto r = strict(c.text);
    CHECK(has_code(r.diagnostics, c.code));
    CHECK(has_errors(r.diagnostics));
    CHECK_FALSE(r.trace);
    // Lenient mode reports the same code as a warning and still yields a trace.
    const auto l = lenient(c.text);
    CHECK(has_code(l.diagnostics, c.code));
    CHECK_FALSE(has_errors(l.diagnostics));
    CHECK(l.trace);
  }
}

TEST_CASE("lenient mode skips wrapper tags and preamble") {
  const std::string text = "Sure, here is the graph.\n<think>\n" + kMinimal + "\n</think>";
  const auto l = lenient(text);
  REQUIRE(l.trace);
  CHECK(*l.trace == *strict(kMinimal).trace);
  CHECK(has_code(l.diagnostics, diag::kStrayText));
  CHECK(has_code(l.diagnostics, diag::kUnknownTag));
}

TEST_CASE("pure prose yields an empty trace") {
  const auto l = lenient("The answer is 42 because 6 * 7 = 42.");
  REQUIRE(l.trace);
  CHECK(l.trace->blocks.empty());
  CHECK(has_code(l.diagnostics, diag::kEmptyTrace));
}

TEST_CASE("last answer block wins in lenient mode") {
  const std::string text =
      "<known><node id=\"1\" parents=\"\">a</node></known>"
      "<answer><node id=\"2\" parents=\"1\">b</node></answer>"
      "<answer><node id=\"3\" parents=\"2\">c</node></answer>";
  const auto l = lenient(text);
  REQUIRE(l.trace);
  CHECK(l.trace->answer_node_id == NodeId{3});
  CHECK(count_code(l.diagnostics, diag::kMultipleAnswers) == 1);
}

TEST_CASE("serializer emits the canonical form") {
  const auto t = *strict(kMinimal).trace;
  const std::string expected =
      "<known>\n"
      "<node id=\"1\" parents=\"\">x=2</node>\n"
      "</known>\n"
      "<answer>\n"
      "<node id=\"2\" parents=\"1\">x=2</node>\n"
      "</answer>\n";
  CHECK(serialize_trace(t) == expected);
  CHECK(serialize_trace(t) == serialize_trace(t));
  CHECK(*strict(expected).trace == t);
}

TEST_CASE("serializer refuses traces that break invariants") {
  Trace t = *strict(kMinimal).trace;
  SUBCASE("empty content") { t.blocks[0].nodes[0].content = ""; }
  SUBCASE("untrimmed content") { t.blocks[0].nodes[0].content = " a"; }
  SUBCASE("content containing a node tag") {
    t.blocks[0].nodes[0].content = "a </node> b";
  }
  SUBCASE("forward parent") { t.blocks[0].nodes[0].parents = {2}; }
  SUBCASE("answer id mismatch") { t.answer_node_id = 1; }
  SUBCASE("no blocks") { t = Trace{}; }
  CHECK_FALSE(check_trace(t).empty());
  CHECK_THROWS_AS(serialize_trace(t), Error);
}

TEST_CASE("content keeps inner newlines and markup-like text") {
  Trace t = *strict(kMinimal).trace;
  t.blocks[0].nodes[0].content = "a < b & \"c\"\nsecond line x>y";
  REQUIRE(is_representable_content(t.blocks[0].nodes[0].content));
  const auto back = strict(serialize_trace(t));
  REQUIRE(back.trace);
  CHECK(*back.trace == t);
}

TEST_CASE("random valid traces round-trip") {
  grptest::Rng rng(20240601);
  for (int i = 0; i < 200; ++i) {
    const Trace t = grptest::random_valid_trace(rng);
    REQUIRE(check_trace(t).empty());
    const std::string text = serialize_trace(t);
    const auto back = strict(text);
    CAPTURE(text);
    REQUIRE(back.trace);
    CHECK(back.diagnostics.empty());
    CHECK(*back.trace == t);
  }
}

TEST_CASE("lenient parsing is total and spans stay inside the input") {
  grptest::Rng rng(77);
  for (int i = 0; i < 3000; ++i) {
    std::string text;
    switch (i % 3) {
      case 0: text = grptest::mutate(rng, serialize_trace(grptest::random_valid_trace(rng))); break;
      case 1: text = grptest::random_prose(rng); break;
      default: text = grptest::random_bytes(rng, 200); break;
    }
    const auto l = lenient(text);
    REQUIRE(l.trace);
    CHECK_FALSE(has_errors(l.diagnostics));
    for (const auto& d : l.diagnostics) {
      CHECK(d.span.begin <= d.span.end);
      CHECK(d.span.end <= text.size());
    }
    // When strict mode accepts, both modes agree.
    const auto s = strict(text);
    CHECK(s.trace.has_value() == !has_errors(s.diagnostics));
    if (s.trace) {
      CHECK(*s.trace == *l.trace);
      CHECK(check_trace(*s.trace).empty());
    }
  }
}

TEST_CASE("lint reports style problems") {
  CHECK(lint_trace(kMinimal).empty());

  const std::string dead_end =
      "<known><node id=\"1\" parents=\"\">a</node></known>"
      "<refine><node id=\"2\" parents=\"1\">b</node></refine>"
      "<answer><node id=\"3\" parents=\"1\">c</node></answer>";
  const auto d = lint_trace(dead_end);
  REQUIRE(count_code(d, diag::kDeadEndNode) == 1);
  for (const auto& x : d) {
    if (x.code == diag::kDeadEndNode) CHECK(x.node_id == NodeId{2});
  }

  const std::string early_answer =
      "<known><node id=\"1\" parents=\"\">a</node></known>"
      "<answer><node id=\"2\" parents=\"1\">b</node></answer>"
      "<known><node id=\"3\" parents=\"\">c</node></known>";
  CHECK(has_code(lint_trace(early_answer), diag::kAnswerNotLast));

  CHECK(has_code(lint_trace("<known><node id=\"1\" parents=\"\">a</node></known>"),
                 diag::kMissingAnswer));
  for (const auto& x : lint_trace(early_answer)) CHECK(x.severity == Severity::Warning);
}

TEST_CASE("mode names") {
  CHECK(parse_mode_from_string("strict") == ParseMode::Strict);
  CHECK(parse_mode_from_string("lenient") == ParseMode::Lenient);
  CHECK_FALSE(parse_mode_from_string("loose"));
  for (Label l : kAllLabels) CHECK(label_from_string(to_string(l)) == l);
  CHECK_FALSE(label_from_string("node"));
}

TEST_CASE("lenient parse repairs bad bytes in content") {
  const std::string text = "<known><node id=\"1\" parents=\"\">caf\xc3 ok</node></known>";
  const auto strict = parse_trace(text, ParseMode::Strict);
  CHECK_FALSE(strict.trace);
  const auto lenient = parse_trace(text, ParseMode::Lenient);
  REQUIRE(lenient.trace);
  CHECK(lenient.trace->blocks[0].nodes[0].content == "caf\xef\xbf\xbd ok");
  CHECK(check_trace(*lenient.trace).empty());

  grptest::Rng rng(17);
  for (int i = 0; i < 3000; ++i) {
    const std::string mutated =
        grptest::mutate(rng, serialize_trace(grptest::random_valid_trace(rng, 10)));
    const auto r = parse_trace(mutated, ParseMode::Lenient);
    REQUIRE(r.trace);
    for (const auto& d : check_trace(*r.trace)) {
      CHECK_MESSAGE(d.code != diag::kUnrepresentableContent, d.message);
    }
  }
}
