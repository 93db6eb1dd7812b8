#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace grpcli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Settings for one run. Every field is optional so that layers (defaults,
// config file, flags) can be merged; unset fields fall through to the layer
// below.
//
// Config file syntax, one setting per line, '#' starts a comment:
//   weights.fmt = 0.4        (also conn, ers, reach, rev)
//   aux.graph = 1            (also fmt, conn, ers, reach, rev)
//   token_counter = whitespace | codepoint
//   parse_mode = lenient | strict
//   epsilon = 0.2
//   beta = 0.04
//   input = rollouts.jsonl
//   output = scores.jsonl
//   jobs = 4
struct RunConfig {
  std::map<std::string, double> weights;
  std::map<std::string, double> aux;
  std::optional<std::string> token_counter;
  std::optional<std::string> parse_mode;
  std::optional<double> epsilon;
  std::optional<double> beta;
  std::optional<std::string> input;
  std::optional<std::string> output;
  std::optional<unsigned> jobs;

  // Applies one "key = value" setting. Throws ConfigError.
  void set(std::string_view key, std::string_view value);
  // Fields set in higher replace ours.
  void merge(const RunConfig& higher);
  // Engine configuration object for grp_engine_create; paths and jobs are
  // run plumbing and stay out of it.
  nlohmann::json engine_json() const;
};

// Throws ConfigError naming the offending line.
RunConfig parse_config_text(std::string_view text);
RunConfig load_config_file(const std::string& path);

}  // namespace grpcli
