#include "grp/grp.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "grp/engine.hpp"
#include "grp/error.hpp"

struct grp_engine {
  grp::EngineConfig config;
  grp::Json config_json;
};

namespace {

char* duplicate(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

grp_status status_of(grp::ErrorKind kind) {
  switch (kind) {
    case grp::ErrorKind::InvalidArgument: return GRP_INVALID_ARGUMENT;
    case grp::ErrorKind::InvalidConfig: return GRP_INVALID_CONFIG;
    case grp::ErrorKind::InvalidTrace: return GRP_INVALID_TRACE;
  }
  return GRP_INTERNAL;
}

grp_status fail(grp_status status, const std::string& message, char** out) {
  if (out) {
    try {
      *out = duplicate(grp::dump_canonical(grp::Json{
          {"error", {{"code", grp_status_name(status)}, {"message", message}}}}));
    } catch (...) {
      *out = nullptr;
    }
  }
  return status;
}

// Runs fn, storing its string result in *out; maps every exception to a
// status and error object.
template <class Fn>
grp_status guarded(char** out, Fn&& fn) {
  if (!out) return GRP_INVALID_ARGUMENT;
  *out = nullptr;
  try {
    char* s = duplicate(fn());
    if (!s) return fail(GRP_INTERNAL, "out of memory", out);
    *out = s;
    return GRP_OK;
  } catch (const grp::Error& e) {
    return fail(status_of(e.kind()), e.what(), out);
  } catch (const grp::Json::exception& e) {
    return fail(GRP_INVALID_ARGUMENT, e.what(), out);
  } catch (const std::bad_alloc&) {
    return fail(GRP_INTERNAL, "out of memory", out);
  } catch (const std::exception& e) {
    return fail(GRP_INTERNAL, e.what(), out);
  } catch (...) {
    return fail(GRP_INTERNAL, "unknown failure", out);
  }
}

grp::Json parse_json(const char* text, const char* what) {
  if (!text) {
    throw grp::Error(grp::ErrorKind::InvalidArgument,
                     std::string(what) + " is null");
  }
  return grp::Json::parse(text);
}

const grp::EngineConfig& config_of(const grp_engine* engine) {
  if (!engine) throw grp::Error(grp::ErrorKind::InvalidArgument, "engine is null");
  return engine->config;
}

std::string_view text_of(const char* text, size_t len) {
  if (!text && len) throw grp::Error(grp::ErrorKind::InvalidArgument, "text is null");
  return text ? std::string_view(text, len) : std::string_view();
}

}  // namespace

extern "C" {

const char* grp_version(void) { return "0.1.0"; }

int grp_schema_version(void) { return grp::kSchemaVersion; }

const char* grp_status_name(grp_status status) {
  switch (status) {
    case GRP_OK: return "ok";
    case GRP_INVALID_ARGUMENT: return "invalid_argument";
    case GRP_INVALID_CONFIG: return "invalid_config";
    case GRP_INVALID_TRACE: return "invalid_trace";
    case GRP_INTERNAL: return "internal";
  }
  return "unknown";
}

grp_status grp_engine_create(const char* config_json, grp_engine** engine,
                             char** error_json) {
  if (error_json) *error_json = nullptr;
  if (!engine) return fail(GRP_INVALID_ARGUMENT, "engine is null", error_json);
  *engine = nullptr;
  try {
    grp::Json j;
    if (config_json && *config_json) {
      try {
        j = grp::Json::parse(config_json);
      } catch (const grp::Json::exception& e) {
        return fail(GRP_INVALID_CONFIG, e.what(), error_json);
      }
    }
    auto config = grp::EngineConfig::from_json(j);
    grp::Json effective = config.to_json();
    *engine = new grp_engine{std::move(config), std::move(effective)};
    return GRP_OK;
  } catch (const grp::Error& e) {
    return fail(status_of(e.kind()), e.what(), error_json);
  } catch (const std::exception& e) {
    return fail(GRP_INTERNAL, e.what(), error_json);
  } catch (...) {
    return fail(GRP_INTERNAL, "unknown failure", error_json);
  }
}

void grp_engine_destroy(grp_engine* engine) { delete engine; }

grp_status grp_engine_config(const grp_engine* engine, char** out) {
  return guarded(out, [&] {
    config_of(engine);
    return grp::dump_canonical(engine->config_json);
  });
}

grp_status grp_score_trace(const grp_engine* engine, const char* text,
                           size_t len, char** out) {
  return guarded(out, [&] {
    return grp::dump_canonical(
        grp::score_trace_json(text_of(text, len), config_of(engine)));
  });
}

grp_status grp_parse_trace(const grp_engine* engine, const char* text,
                           size_t len, char** out) {
  return guarded(out, [&] {
    return grp::dump_canonical(
        grp::parse_trace_json(text_of(text, len), config_of(engine)));
  });
}

grp_status grp_score_record(const grp_engine* engine, const char* record_json,
                            char** out) {
  return guarded(out, [&] {
    const auto& config = config_of(engine);
    return grp::dump_canonical(
        grp::score_record(parse_json(record_json, "record"), config).body);
  });
}

grp_status grp_validate_record(const grp_engine* engine,
                               const char* record_json, char** out) {
  return guarded(out, [&] {
    const auto& config = config_of(engine);
    return grp::dump_canonical(
        grp::validate_record(parse_json(record_json, "record"), config).body);
  });
}

grp_status grp_group_advantages(const grp_engine* engine,
                                const char* group_json, char** out) {
  return guarded(out, [&] {
    const auto& config = config_of(engine);
    return grp::dump_canonical(
        grp::advantage_record(parse_json(group_json, "group"), config).body);
  });
}

grp_status grp_objective(const grp_engine* engine, const char* group_json,
                         char** out) {
  return guarded(out, [&] {
    const auto& config = config_of(engine);
    return grp::dump_canonical(
        grp::objective_record(parse_json(group_json, "group"), config).body);
  });
}

grp_status grp_qc_record(const grp_engine* engine, const char* record_json,
                         char** out) {
  return guarded(out, [&] {
    const auto& config = config_of(engine);
    return grp::dump_canonical(
        grp::qc_record(parse_json(record_json, "record"), config).body);
  });
}

grp_status grp_qc_summary(const char* reports_json, char** out) {
  return guarded(out, [&] {
    return grp::dump_canonical(
        grp::qc_summary(parse_json(reports_json, "reports")));
  });
}

grp_status grp_simulate_hacking(const char* scenario_json, char** out) {
  return guarded(out, [&] {
    return grp::dump_canonical(
        grp::simulate_record(parse_json(scenario_json, "scenario")));
  });
}

grp_status grp_export_graph(const char* text, size_t len, const char* format,
                            char** out) {
  return guarded(out, [&] {
    if (!format) {
      throw grp::Error(grp::ErrorKind::InvalidArgument, "format is null");
    }
    return grp::export_graph(text_of(text, len), format);
  });
}

void grp_string_free(char* s) { std::free(s); }

}  // extern "C"
