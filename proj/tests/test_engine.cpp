#include <doctest.h>

#include <optional>
#include <string>

#include "grp/engine.hpp"
#include "grp/error.hpp"
#include "support/generators.hpp"

using namespace grp;

namespace {

std::optional<ErrorKind> kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("trace mirror round trip") {
  grptest::Rng rng(71);
  for (int i = 0; i < 1000; ++i) {
    const Trace t = grptest::random_valid_trace(rng, 12);
    const Json j = to_json(t);
    CHECK(trace_from_json(j) == t);
    CHECK(dump_canonical(to_json(trace_from_json(Json::parse(dump_canonical(j))))) ==
          dump_canonical(j));
  }
}

TEST_CASE("mirror schema errors name the field") {
  const auto message = [](const char* text) {
    try {
      trace_from_json(Json::parse(text));
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidArgument);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"blocks":[{"label":"known","nodes":[{"id":0,"parents":[],"content":""}]}]})")
            .find("trace.blocks[0].nodes[0].id") != std::string::npos);
  CHECK(message(R"({"blocks":[{"label":"ponder","nodes":[]}]})").find("trace.blocks[0].label") !=
        std::string::npos);
  CHECK(message(R"({"blocks":"x"})").find("trace.blocks") != std::string::npos);
  CHECK(message(R"([])") != "no error");
}

TEST_CASE("canonical dump sorts keys and repairs bad utf-8") {
  CHECK(dump_canonical(Json{{"b", 1}, {"a", 2.5}}) == R"({"a":2.5,"b":1})");
  CHECK(dump_canonical(Json(std::string("a\xff"))) == "\"a\xef\xbf\xbd\"");
}

TEST_CASE("engine config parsing") {
  const auto def = EngineConfig::from_json(nullptr);
  CHECK_FALSE(def.epsilon);
  CHECK(def.to_json()["parse_mode"] == "lenient");

  const auto c = EngineConfig::from_json(Json::parse(
      R"({"weights":{"fmt":0.4,"conn":0.15,"ers":0.15,"reach":0.15,"rev":0.15},
          "token_counter":"codepoint","parse_mode":"strict","epsilon":0.1,"beta":0})"));
  CHECK(c.scoring.weights.fmt == 0.4);
  CHECK(c.scoring.mode == ParseMode::Strict);
  CHECK(*c.epsilon == 0.1);
  CHECK(*c.beta == 0.0);
  CHECK(EngineConfig::from_json(c.to_json()).to_json() == c.to_json());

  for (const char* bad : {R"({"weight":{}})", R"({"weights":{"fmt":2}})",
                          R"({"weights":{"fmt":0.5,"conn":0.5,"ers":0.5,"reach":0,"rev":0}})",
                          R"({"token_counter":"bpe"})", R"({"parse_mode":"loose"})",
                          R"({"epsilon":0})", R"({"beta":-1})", R"({"aux":{"graph":0.5}})",
                          R"([1])", R"({"epsilon":"0.2"})"}) {
    CAPTURE(bad);
    CHECK(kind_of([&] { EngineConfig::from_json(Json::parse(bad)); }) ==
          ErrorKind::InvalidConfig);
  }
}

TEST_CASE("record operations") {
  const EngineConfig cfg;
  const std::string clean =
      "<known><node id=\"1\" parents=\"\">a</node></known>"
      "<answer><node id=\"2\" parents=\"1\">b</node></answer>";

  const auto s = score_record({{"id", "r1"}, {"trace_text", clean}}, cfg);
  CHECK(s.body["id"] == "r1");
  CHECK(s.body["reward"]["total"] == 1.0);
  CHECK_FALSE(s.degraded);
  CHECK(score_record({{"trace_text", "prose"}}, cfg).degraded);
  CHECK(score_record({{"trace_text", "prose"}}, cfg).body["id"].is_null());
  CHECK(kind_of([&] { score_record({{"id", 1}}, cfg); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { score_record({{"trace_text", 5}}, cfg); }) == ErrorKind::InvalidArgument);

  const auto v = validate_record({{"trace_text", clean}}, cfg);
  CHECK(v.body["valid"] == true);
  CHECK(v.body["canonical"].get<std::string>().back() == '\n');
  CHECK(validate_record({{"trace_text", "<known>"}}, cfg).degraded);

  const auto a = advantage_record(
      Json::parse(R"({"group_id":"g","samples":[{"acc":1,"aux":0.5},{"acc":0,"trace_text":"x"}]})"),
      cfg);
  CHECK(a.degraded);
  CHECK(a.body["samples"][1]["aux"] == 0.0);
  CHECK(a.body["stats"]["mean_aux_wrong"] == 0.0);
  CHECK(kind_of([&] { advantage_record(Json::parse(R"({"samples":[]})"), cfg); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { advantage_record(Json::parse(R"({"samples":[{"acc":1}]})"), cfg); }) ==
        ErrorKind::InvalidArgument);

  const Json seqs = Json::parse(
      R"({"sequences":[{"logp_new":[-1],"logp_old":[-1],"logp_ref":[-1],"advantage":0.25}]})");
  CHECK(kind_of([&] { objective_record(seqs, cfg); }) == ErrorKind::InvalidConfig);
  EngineConfig oc;
  oc.epsilon = 0.2;
  oc.beta = 0.04;
  CHECK(objective_record(seqs, oc).body["objective"] == 0.25);

  const auto q = qc_record({{"id", "q"}, {"trace_text", clean}, {"answer_correct", false}}, cfg);
  CHECK(q.body["passed"] == true);
  CHECK(q.body["answer_correct"] == false);
  CHECK(kind_of([&] { qc_record({{"trace_text", clean}, {"answer_correct", 1}}, cfg); }) ==
        ErrorKind::InvalidArgument);

  const Json summary = qc_summary(Json::array({q.body}));
  CHECK(summary["records"] == 1);
  CHECK(summary["violations"].size() == std::size(kAllViolationCodes));
  CHECK(kind_of([&] { qc_summary(Json::object()); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("graph export formats") {
  const std::string t = "<known><node id=\"1\" parents=\"\">a \"q\"</node></known>"
                        "<answer><node id=\"2\" parents=\"1\">b</node></answer>";
  CHECK(export_graph(t, "edgelist") == "# nodes: 1 2\n1 2\n");
  CHECK(export_graph(t, "dot").rfind("digraph", 0) == 0);
  CHECK(kind_of([&] { export_graph(t, "svg"); }) == ErrorKind::InvalidArgument);
}
