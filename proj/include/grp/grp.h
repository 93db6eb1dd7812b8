#ifndef GRP_GRP_H
#define GRP_GRP_H

/* C interface to the reasoning-graph scoring library.
 *
 * Every function takes UTF-8 JSON (or trace text) in and hands back UTF-8
 * JSON out. Output strings are allocated by the library and released with
 * grp_string_free. On failure the status is non-zero and *out holds
 * {"error":{"code":"...","message":"..."}} instead of a result. No C++
 * exception crosses this boundary.
 *
 * An engine is immutable after creation; concurrent calls on one engine from
 * several threads are safe. */

#include <stddef.h>

#if defined(_WIN32)
#define GRP_API __declspec(dllexport)
#else
#define GRP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct grp_engine grp_engine;

typedef enum grp_status {
  GRP_OK = 0,
  GRP_INVALID_ARGUMENT = 1, /* null pointer, malformed JSON, bad record */
  GRP_INVALID_CONFIG = 2,
  GRP_INVALID_TRACE = 3,
  GRP_INTERNAL = 4
} grp_status;

GRP_API const char* grp_version(void);
GRP_API const char* grp_status_name(grp_status status);
/* Version of the JSON record schemas. */
GRP_API int grp_schema_version(void);

/* config_json may be NULL or "" for defaults. On failure *engine is NULL and
 * *error_json (if error_json is non-NULL) receives the error object. */
GRP_API grp_status grp_engine_create(const char* config_json,
                                     grp_engine** engine, char** error_json);
GRP_API void grp_engine_destroy(grp_engine* engine);

/* Effective configuration as JSON. */
GRP_API grp_status grp_engine_config(const grp_engine* engine, char** out);

/* Trace text (len bytes, need not be NUL-terminated) -> score report. */
GRP_API grp_status grp_score_trace(const grp_engine* engine, const char* text,
                                   size_t len, char** out);
/* Trace text -> {trace, diagnostics}. */
GRP_API grp_status grp_parse_trace(const grp_engine* engine, const char* text,
                                   size_t len, char** out);

/* Record JSON in, record JSON out; identical to one output line of the
 * matching command-line subcommand. */
GRP_API grp_status grp_score_record(const grp_engine* engine,
                                    const char* record_json, char** out);
GRP_API grp_status grp_validate_record(const grp_engine* engine,
                                       const char* record_json, char** out);
GRP_API grp_status grp_group_advantages(const grp_engine* engine,
                                        const char* group_json, char** out);
GRP_API grp_status grp_objective(const grp_engine* engine,
                                 const char* group_json, char** out);
GRP_API grp_status grp_qc_record(const grp_engine* engine,
                                 const char* record_json, char** out);
/* JSON array of qc record outputs -> summary with a count per violation
 * code. */
GRP_API grp_status grp_qc_summary(const char* reports_json, char** out);
GRP_API grp_status grp_simulate_hacking(const char* scenario_json, char** out);

/* format is "dot" or "edgelist"; *out is the graph text, not JSON. */
GRP_API grp_status grp_export_graph(const char* text, size_t len,
                                    const char* format, char** out);

GRP_API void grp_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
