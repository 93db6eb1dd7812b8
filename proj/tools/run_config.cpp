#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace grpcli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_number(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    throw ConfigError(std::string(key) + ": '" + std::string(value) +
                      "' is not a number");
  }
  return v;
}

unsigned to_count(std::string_view key, std::string_view value) {
  unsigned v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty() ||
      v == 0) {
    throw ConfigError(std::string(key) + ": '" + std::string(value) +
                      "' is not a positive integer");
  }
  return v;
}

constexpr std::string_view kWeightKeys[] = {"fmt", "conn", "ers", "reach", "rev"};
constexpr std::string_view kAuxKeys[] = {"graph", "fmt", "conn", "ers", "reach", "rev"};

template <std::size_t N>
bool one_of(std::string_view s, const std::string_view (&set)[N]) {
  for (auto k : set) {
    if (k == s) return true;
  }
  return false;
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key.rfind("weights.", 0) == 0 && one_of(key.substr(8), kWeightKeys)) {
    weights[std::string(key.substr(8))] = to_number(key, value);
  } else if (key.rfind("aux.", 0) == 0 && one_of(key.substr(4), kAuxKeys)) {
    aux[std::string(key.substr(4))] = to_number(key, value);
  } else if (key == "token_counter") {
    token_counter = std::string(value);
  } else if (key == "parse_mode") {
    parse_mode = std::string(value);
  } else if (key == "epsilon") {
    epsilon = to_number(key, value);
  } else if (key == "beta") {
    beta = to_number(key, value);
  } else if (key == "input") {
    input = std::string(value);
  } else if (key == "output") {
    output = std::string(value);
  } else if (key == "jobs") {
    jobs = to_count(key, value);
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

void RunConfig::merge(const RunConfig& higher) {
  for (const auto& [k, v] : higher.weights) weights[k] = v;
  for (const auto& [k, v] : higher.aux) aux[k] = v;
  if (higher.token_counter) token_counter = higher.token_counter;
  if (higher.parse_mode) parse_mode = higher.parse_mode;
  if (higher.epsilon) epsilon = higher.epsilon;
  if (higher.beta) beta = higher.beta;
  if (higher.input) input = higher.input;
  if (higher.output) output = higher.output;
  if (higher.jobs) jobs = higher.jobs;
}

nlohmann::json RunConfig::engine_json() const {
  nlohmann::json j = nlohmann::json::object();
  if (!weights.empty()) {
    // Unset weights keep the engine default of 0.2 each.
    nlohmann::json w = nlohmann::json::object();
    for (auto k : kWeightKeys) w[std::string(k)] = 0.2;
    for (const auto& [k, v] : weights) w[k] = v;
    j["weights"] = w;
  }
  if (!aux.empty()) {
    nlohmann::json a = nlohmann::json::object();
    for (const auto& [k, v] : aux) a[k] = v;
    if (!aux.count("graph")) a["graph"] = 0.0;
    j["aux"] = a;
  }
  if (token_counter) j["token_counter"] = *token_counter;
  if (parse_mode) j["parse_mode"] = *parse_mode;
  if (epsilon) j["epsilon"] = *epsilon;
  if (beta) j["beta"] = *beta;
  return j;
}

RunConfig parse_config_text(std::string_view text) {
  RunConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    try {
      config.set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace grpcli
