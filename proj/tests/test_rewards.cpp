#include <doctest.h>

#include <string>

#include "grp/error.hpp"
#include "grp/rewards.hpp"
#include "support/generators.hpp"
#include "support/helpers.hpp"

using namespace grp;

namespace {

constexpr double kTol = 1e-12;

struct Scored {
  Trace trace;
  ReasoningGraph graph;
};

Scored load(const std::string& text) {
  auto parsed = parse_trace(text, ParseMode::Strict);
  REQUIRE_MESSAGE(parsed.trace, text);
  Scored s{*parsed.trace, {}};
  s.graph = build_graph(s.trace);
  return s;
}

std::string node(int id, const std::string& parents, const std::string& content) {
  return "<node id=\"" + std::to_string(id) + "\" parents=\"" + parents + "\">" +
         content + "</node>";
}

std::string block(const std::string& label, const std::string& nodes) {
  return "<" + label + ">" + nodes + "</" + label + ">";
}

// Chain of three five-token nodes ending at the answer, plus a five-token
// dead end hanging off node 2.
const std::string kChainWithDeadEnd =
    block("known", node(1, "", "one two three four five")) +
    block("refine", node(2, "1", "six seven eight nine ten")) +
    block("refine", node(4, "2", "a b c d e")) +
    block("answer", node(3, "2", "so the answer is 5"));

}  // namespace

TEST_CASE("density counts aggregate and refine tag blocks") {
  const auto s = load(block("known", node(1, "", "a") + node(2, "", "b")) +
                      block("aggregate", node(3, "1,2", "c")) +
                      block("aggregate", node(4, "1,2", "d") + node(5, "3,4", "e")));
  CHECK(std::abs(reward_format(s.trace, s.graph).dens - 0.5) <= kTol);
}

TEST_CASE("topology checks parent counts per label") {
  const auto s = load(block("generate", node(1, "", "a") + node(2, "", "b")) +
                      block("known", node(3, "1", "c")) +
                      block("aggregate", node(4, "1,2", "d")) +
                      block("refine", node(5, "4", "e")));
  CHECK(std::abs(reward_format(s.trace, s.graph).topo - 2.0 / 3.0) <= kTol);
}

TEST_CASE("parallelism forbids edges inside a cognitive block") {
  const auto s = load(block("known", node(1, "", "x")) +
                      block("generate", node(2, "1", "a") + node(3, "2", "b")));
  const auto f = reward_format(s.trace, s.graph);
  CHECK(std::abs(f.para - 0.5) <= kTol);
  CHECK(std::abs(f.total - (f.dens + f.topo + f.para) / 3.0) <= kTol);
}

TEST_CASE("connectivity is one over the component count") {
  std::string knowns;
  for (int i = 1; i <= 4; ++i) knowns += node(i, "", "k");
  CHECK(std::abs(reward_connectivity(load(block("known", knowns)).graph) - 0.25) <= kTol);
  CHECK(reward_connectivity(load(block("known", node(1, "", "k") + node(2, "", "j"))).graph) ==
        0.5);
  CHECK(reward_connectivity(load(block("known", node(1, "", "k"))).graph) == 1.0);
}

TEST_CASE("effective subgraph token ratio and reverse search on a dead end") {
  const auto s = load(kChainWithDeadEnd);
  const auto counter = TokenCounter::whitespace();
  CHECK(std::abs(reward_ers_ratio(s.graph, counter) - 0.75) <= kTol);
  CHECK(std::abs(reward_reverse_search(s.graph) - 0.75) <= kTol);
  CHECK(reward_reachability(s.graph) == 1.0);
}

TEST_CASE("no answer zeroes the answer-dependent rewards") {
  const auto s = load(block("known", node(1, "", "a")) + block("refine", node(2, "1", "b")));
  CHECK(reward_ers_ratio(s.graph, TokenCounter::whitespace()) == 0.0);
  CHECK(reward_reachability(s.graph) == 0.0);
  CHECK(reward_reverse_search(s.graph) == 0.0);
}

TEST_CASE("answer without parents among five nodes") {
  std::string knowns;
  for (int i = 1; i <= 4; ++i) knowns += node(i, "", "k");
  const auto s = load(block("known", knowns) + block("answer", node(5, "", "42")));
  CHECK(std::abs(reward_reverse_search(s.graph) - 0.2) <= kTol);
  CHECK(reward_reachability(s.graph) == 0.0);
  CHECK(reward_ers_ratio(s.graph, TokenCounter::whitespace()) == 0.0);
}

TEST_CASE("clean chain scores 1 everywhere") {
  const auto s = load(block("known", node(1, "", "a")) + block("refine", node(2, "1", "b")) +
                      block("answer", node(3, "2", "c")));
  const auto r = score_graph(s.trace, s.graph, {});
  CHECK(r.fmt.total == 1.0);
  CHECK(r.conn == 1.0);
  CHECK(r.ers == 1.0);
  CHECK(r.reach == 1.0);
  CHECK(r.rev == 1.0);
  CHECK(r.total == 1.0);
}

TEST_CASE("weighted total") {
  RewardComponents c;
  c.fmt = {1.0, 1.0, 1.0, 1.0};
  c.conn = 0.5;
  c.ers = 0.75;
  c.reach = 1.0;
  c.rev = 0.75;
  CHECK(std::abs(reward_total(c, {}).total - 0.8) <= kTol);

  CHECK(reward_total({}, {}).total == 0.0);
  RewardComponents ones{{1, 1, 1, 1}, 1, 1, 1, 1};
  CHECK(reward_total(ones, {0.1, 0.3, 0.2, 0.15, 0.25}).total == 1.0);

  c.conn = 1.5;
  CHECK_THROWS_AS(reward_total(c, {}), Error);
}

TEST_CASE("weights must be convex") {
  CHECK_NOTHROW(RewardWeights{}.validate());
  CHECK_NOTHROW((RewardWeights{1, 0, 0, 0, 0}.validate()));
  CHECK_THROWS_AS((RewardWeights{0.5, 0.5, 0.5, 0, 0}.validate()), Error);
  CHECK_THROWS_AS((RewardWeights{-0.2, 0.4, 0.4, 0.2, 0.2}.validate()), Error);
  bool invalid_config = false;
  try {
    RewardWeights{0.3, 0.3, 0.3, 0.3, 0.3}.validate();
  } catch (const Error& e) {
    invalid_config = e.kind() == ErrorKind::InvalidConfig;
  }
  CHECK(invalid_config);
}

TEST_CASE("vacuous sets score 1") {
  const auto s = load(block("generate", node(1, "", "a")) + block("reflect", node(2, "1", "b")));
  const auto f = reward_format(s.trace, s.graph);
  CHECK(f.dens == 1.0);
  CHECK(f.topo == 1.0);
  CHECK(f.para == 1.0);
}

TEST_CASE("empty graph scores zero with a diagnostic") {
  for (const char* text : {"", "just some prose", "<known></known>"}) {
    const auto r = score_text(text, {});
    CHECK(r.reward == RewardVector{});
    CHECK(r.degraded);
    CHECK(grptest::has_code(r.diagnostics, diag::kEmptyGraph));
    CHECK(r.stats.nodes == 0);
  }
}

TEST_CASE("strict scoring rejects malformed text with zero reward") {
  ScoringOptions o;
  o.mode = ParseMode::Strict;
  const auto r = score_text("<known><node id=\"1\" parents=\"2\">a</node></known>", o);
  CHECK(r.rejected);
  CHECK(r.degraded);
  CHECK(r.reward == RewardVector{});
  const auto ok = score_text(kChainWithDeadEnd, o);
  CHECK_FALSE(ok.rejected);
  CHECK_FALSE(ok.degraded);
  CHECK(ok.stats.nodes == 4);
  CHECK(ok.stats.edges == 3);
  CHECK(ok.stats.ers_nodes == 3);
  CHECK(ok.stats.shortest_path == std::size_t{2});
}

TEST_CASE("token counters") {
  CHECK(count_whitespace_tokens("") == 0);
  CHECK(count_whitespace_tokens("  a  bb\tc\n") == 3);
  CHECK(count_whitespace_tokens("a　b c") == 3);
  CHECK(count_whitespace_tokens("日本語 text") == 2);
  CHECK(count_codepoint_tokens("") == 0);
  CHECK(count_codepoint_tokens("日本 ab") == 4);
  CHECK(TokenCounter::by_name("codepoint").name() == "codepoint");
  CHECK_THROWS_AS(TokenCounter::by_name("bpe"), Error);

  ScoringOptions o;
  o.counter = TokenCounter::codepoints();
  // Dead end "abcde" is 5 of 25 code points.
  const std::string text = block("known", node(1, "", "aaaaaaaaaa")) +
                           block("refine", node(3, "1", "abcde")) +
                           block("answer", node(2, "1", "bbbbbbbbbb"));
  CHECK(std::abs(score_text(text, o).reward.ers - 0.8) <= kTol);
}

TEST_CASE("aux mix") {
  RewardVector r;
  r.total = 0.6;
  r.fmt.total = 0.9;
  CHECK(AuxMix{}.apply(r) == 0.6);
  CHECK(std::abs((AuxMix{0.5, 0.5, 0, 0, 0, 0}.apply(r)) - 0.75) <= kTol);
  CHECK_THROWS_AS((AuxMix{0.5, 0.6, 0, 0, 0, 0}.validate()), Error);
}

TEST_CASE("rewards stay in range and are deterministic on fuzzed rollouts") {
  grptest::Rng rng(4242);
  for (int i = 0; i < 2000; ++i) {
    std::string text = grp::serialize_trace(grptest::random_valid_trace(rng, 14));
    if (i % 3 == 1) text = grptest::mutate(rng, text);
    if (i % 7 == 2) text = grptest::random_prose(rng);
    const auto a = score_text(text, {});
    const auto b = score_text(text, {});
    CHECK(a.reward == b.reward);
    const auto& r = a.reward;
    for (double v : {r.fmt.dens, r.fmt.topo, r.fmt.para, r.fmt.total, r.conn, r.ers, r.reach,
                     r.rev, r.total}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("reward properties on random graphs") {
  grptest::Rng rng(555);
  const auto counter = TokenCounter::whitespace();
  for (int i = 0; i < 500; ++i) {
    grptest::Dag d = grptest::random_dag(rng, grptest::pick(rng, 1, 10), 0.35);
    const Trace t = grptest::trace_from_dag(d);
    const auto g = build_graph(t);

    if (g.answer_id()) {
      // Reachability agrees with a non-empty effective subgraph.
      CHECK((reward_reachability(g) == 1.0) == !extract_ers(g).empty());
      CHECK(reward_reverse_search(g) >= 1.0 / static_cast<double>(g.size()) - kTol);
    }

    d.parents.emplace_back();
    ++d.n;
    const auto g2 = build_graph(grptest::trace_from_dag(d));
    CHECK(reward_connectivity(g2) < reward_connectivity(g));
    CHECK(reward_reverse_search(g2) <= reward_reverse_search(g));
    const double e1 = reward_ers_ratio(g, counter);
    const double e2 = reward_ers_ratio(g2, counter);
    CHECK(e2 <= e1);
    if (e1 > 0.0) CHECK(e2 < e1);
  }
}
