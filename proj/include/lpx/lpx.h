/* Copyright 2026 The lpx Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to liblpx. Handles are opaque; every call returns an
 * lpx_status and, on failure, records a thread-local diagnostic readable
 * with lpx_last_error(). Strings returned through char** are owned by the
 * caller and released with lpx_string_free(). */

#ifndef LPX_LPX_H_
#define LPX_LPX_H_

#ifdef __cplusplus
extern "C" {
#endif

#if defined(LPX_BUILDING_LIBRARY)
#define LPX_API __attribute__((visibility("default")))
#else
#define LPX_API
#endif

typedef enum lpx_status {
  LPX_OK = 0,
  LPX_ERR_USAGE = 1,    /* bad argument or unsupported request */
  LPX_ERR_INPUT = 2,    /* unreadable or invalid snapshot data */
  LPX_ERR_SOLVER = 3,   /* LP or active-set failure */
  LPX_ERR_HISTORY = 4,  /* history stream or overlay failure */
  LPX_ERR_INTERNAL = 5
} lpx_status;

typedef enum lpx_history_format {
  LPX_HISTORY_JSON = 0,
  LPX_HISTORY_MARKDOWN = 1,
  LPX_HISTORY_CSV = 2
} lpx_history_format;

typedef struct lpx_snapshot lpx_snapshot;
typedef struct lpx_explanation lpx_explanation;
typedef struct lpx_server lpx_server;

typedef struct lpx_history_options {
  const char* intent_path; /* NULL: no intent list */
  const char* live_path;   /* NULL: no live overlay */
  int columns;             /* <= 0: 3 */
  int jobs;                /* <= 0: logical cores */
  lpx_history_format format;
} lpx_history_options;

typedef struct lpx_server_options {
  const char* host;         /* NULL: 127.0.0.1 */
  int port;                 /* 0: any free port */
  const char* history_path; /* NULL: no history */
  const char* intent_path;  /* NULL: no intent list */
  const char* web_root;     /* NULL: no static assets */
  int jobs;
} lpx_server_options;

LPX_API const char* lpx_version(void);
LPX_API const char* lpx_explanation_schema(void);

/* "<stage>: <Code>: <detail>" for the last failure on this thread. */
LPX_API const char* lpx_last_error(void);
/* Error code name of the last failure ("EmptyHistory", ...), or "". */
LPX_API const char* lpx_last_error_code(void);
LPX_API void lpx_string_free(char* s);

LPX_API lpx_status lpx_snapshot_load(const char* path, lpx_snapshot** out);
LPX_API lpx_status lpx_snapshot_parse(const char* json, lpx_snapshot** out);
LPX_API void lpx_snapshot_free(lpx_snapshot* snapshot);
LPX_API int lpx_snapshot_mv_count(const lpx_snapshot* snapshot);
LPX_API int lpx_snapshot_cv_count(const lpx_snapshot* snapshot);
/* Accepts an MV id or a zero-based index in decimal. */
LPX_API lpx_status lpx_snapshot_mv_index(const lpx_snapshot* snapshot, const char* name,
                                         int* out);

LPX_API lpx_status lpx_explain(const lpx_snapshot* snapshot, lpx_explanation** out);
LPX_API void lpx_explanation_free(lpx_explanation* explanation);
LPX_API lpx_status lpx_explanation_json(const lpx_explanation* explanation, char** out);
LPX_API lpx_status lpx_explanation_table(const lpx_explanation* explanation, char** out);
LPX_API int lpx_explanation_pair_count(const lpx_explanation* explanation);
/* side: 0 lower limit, 1 upper limit. */
LPX_API lpx_status lpx_explanation_pair(const lpx_explanation* explanation, int index,
                                        int* mv, int* cv, int* side);
LPX_API int lpx_explanation_warning_count(const lpx_explanation* explanation);
LPX_API const char* lpx_explanation_warning(const lpx_explanation* explanation, int index);

/* Either output may be NULL. */
LPX_API lpx_status lpx_sweep(const lpx_snapshot* snapshot, int mv_i, int mv_j, int steps,
                             char** json_out, char** csv_out);

LPX_API lpx_status lpx_whatif(const lpx_snapshot* snapshot, const char* overrides_json,
                              char** out);

LPX_API lpx_status lpx_history_report(const char* jsonl_path, const lpx_history_options* options,
                                      char** out);

LPX_API lpx_status lpx_server_create(const lpx_server_options* options, lpx_server** out);
/* Serves on a background thread; *port receives the bound port. */
LPX_API lpx_status lpx_server_start(lpx_server* server, int* port);
/* Serves on the calling thread until lpx_server_stop(). */
LPX_API lpx_status lpx_server_run(lpx_server* server);
LPX_API void lpx_server_stop(lpx_server* server);
LPX_API void lpx_server_free(lpx_server* server);

#ifdef __cplusplus
}
#endif

#endif /* LPX_LPX_H_ */
