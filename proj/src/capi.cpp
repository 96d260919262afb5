// Copyright 2026 The lpx Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lpx/lpx.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "lpx/history.hpp"
#include "lpx/sensitivity.hpp"
#include "lpx/service.hpp"
#include "lpx/whatif.hpp"

struct lpx_snapshot {
  lpx::ControllerSnapshot value;
};

struct lpx_explanation {
  lpx::ExplanationDocument value;
};

struct lpx_server {
  std::unique_ptr<lpx::Service> service;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_code;

lpx_status StatusOf(lpx::ErrorCode code) {
  switch (lpx::ClassOf(code)) {
    case lpx::ErrorClass::kUsage: return LPX_ERR_USAGE;
    case lpx::ErrorClass::kInput: return LPX_ERR_INPUT;
    case lpx::ErrorClass::kSolver: return LPX_ERR_SOLVER;
    case lpx::ErrorClass::kHistory: return LPX_ERR_HISTORY;
    case lpx::ErrorClass::kInternal: break;
  }
  return LPX_ERR_INTERNAL;
}

template <typename F>
lpx_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    g_last_code.clear();
    return LPX_OK;
  } catch (const lpx::Error& e) {
    g_last_error = e.Describe();
    g_last_code = std::string(lpx::ErrorCodeName(e.code()));
    return StatusOf(e.code());
  } catch (const std::exception& e) {
    g_last_error = std::string("internal: ") + e.what();
    g_last_code = "Internal";
    return LPX_ERR_INTERNAL;
  }
}

lpx_status Null(const char* what) {
  g_last_error = std::string("api: InvalidArgument: null ") + what;
  g_last_code = "InvalidArgument";
  return LPX_ERR_USAGE;
}

char* Copy(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* lpx_version(void) { return LPX_VERSION; }
const char* lpx_explanation_schema(void) { return lpx::kExplanationSchema; }
const char* lpx_last_error(void) { return g_last_error.c_str(); }
const char* lpx_last_error_code(void) { return g_last_code.c_str(); }
void lpx_string_free(char* s) { std::free(s); }

lpx_status lpx_snapshot_load(const char* path, lpx_snapshot** out) {
  if (path == nullptr || out == nullptr) return Null("argument");
  return Guard([&] { *out = new lpx_snapshot{lpx::LoadSnapshot(path)}; });
}

lpx_status lpx_snapshot_parse(const char* json, lpx_snapshot** out) {
  if (json == nullptr || out == nullptr) return Null("argument");
  return Guard([&] { *out = new lpx_snapshot{lpx::ParseSnapshot(json)}; });
}

void lpx_snapshot_free(lpx_snapshot* snapshot) { delete snapshot; }

int lpx_snapshot_mv_count(const lpx_snapshot* snapshot) {
  return snapshot ? static_cast<int>(snapshot->value.n()) : 0;
}

int lpx_snapshot_cv_count(const lpx_snapshot* snapshot) {
  return snapshot ? static_cast<int>(snapshot->value.m()) : 0;
}

lpx_status lpx_snapshot_mv_index(const lpx_snapshot* snapshot, const char* name, int* out) {
  if (snapshot == nullptr || name == nullptr || out == nullptr) return Null("argument");
  return Guard([&] {
    if (auto i = snapshot->value.FindMV(name)) {
      *out = static_cast<int>(*i);
      return;
    }
    char* end = nullptr;
    const long v = std::strtol(name, &end, 10);
    if (*name == '\0' || *end != '\0' || v < 0 || v >= snapshot->value.n()) {
      throw lpx::Error(lpx::ErrorCode::kUnknownId, "api",
                       std::string("no MV named '") + name + "'");
    }
    *out = static_cast<int>(v);
  });
}

lpx_status lpx_explain(const lpx_snapshot* snapshot, lpx_explanation** out) {
  if (snapshot == nullptr || out == nullptr) return Null("argument");
  return Guard([&] { *out = new lpx_explanation{lpx::Explain(snapshot->value)}; });
}

void lpx_explanation_free(lpx_explanation* explanation) { delete explanation; }

lpx_status lpx_explanation_json(const lpx_explanation* explanation, char** out) {
  if (explanation == nullptr || out == nullptr) return Null("argument");
  return Guard([&] { *out = Copy(lpx::ExplanationToJson(explanation->value).dump(2) + "\n"); });
}

lpx_status lpx_explanation_table(const lpx_explanation* explanation, char** out) {
  if (explanation == nullptr || out == nullptr) return Null("argument");
  return Guard([&] { *out = Copy(lpx::RenderExplanationTable(explanation->value)); });
}

int lpx_explanation_pair_count(const lpx_explanation* explanation) {
  return explanation ? static_cast<int>(explanation->value.pairs.size()) : 0;
}

lpx_status lpx_explanation_pair(const lpx_explanation* explanation, int index, int* mv, int* cv,
                                int* side) {
  if (explanation == nullptr) return Null("explanation");
  return Guard([&] {
    const auto& pairs = explanation->value.pairs;
    if (index < 0 || index >= static_cast<int>(pairs.size())) {
      throw lpx::Error(lpx::ErrorCode::kInvalidArgument, "api", "pair index out of range");
    }
    const auto& p = pairs[static_cast<std::size_t>(index)];
    if (mv) *mv = static_cast<int>(p.mv);
    if (cv) *cv = static_cast<int>(p.cv);
    if (side) *side = p.side == lpx::Side::kHi ? 1 : 0;
  });
}

int lpx_explanation_warning_count(const lpx_explanation* explanation) {
  return explanation ? static_cast<int>(explanation->value.warnings.size()) : 0;
}

const char* lpx_explanation_warning(const lpx_explanation* explanation, int index) {
  if (explanation == nullptr || index < 0 ||
      index >= static_cast<int>(explanation->value.warnings.size())) {
    return nullptr;
  }
  return explanation->value.warnings[static_cast<std::size_t>(index)].c_str();
}

lpx_status lpx_sweep(const lpx_snapshot* snapshot, int mv_i, int mv_j, int steps,
                     char** json_out, char** csv_out) {
  if (snapshot == nullptr) return Null("snapshot");
  return Guard([&] {
    const lpx::SweepResult r = lpx::SweepCostRatio(snapshot->value, mv_i, mv_j, steps);
    std::string json = lpx::SweepToJson(r).dump(2) + "\n";
    std::string csv = lpx::SweepToCsv(r);
    if (json_out) *json_out = Copy(json);
    if (csv_out) *csv_out = Copy(csv);
  });
}

lpx_status lpx_whatif(const lpx_snapshot* snapshot, const char* overrides_json, char** out) {
  if (snapshot == nullptr || out == nullptr) return Null("argument");
  return Guard([&] {
    nlohmann::json doc;
    if (overrides_json != nullptr && *overrides_json != '\0') {
      try {
        doc = nlohmann::json::parse(overrides_json);
      } catch (const nlohmann::json::exception& e) {
        throw lpx::Error(lpx::ErrorCode::kParseError, "whatif", e.what());
      }
    }
    const auto result = lpx::RunWhatIf(snapshot->value, lpx::ParseOverrides(doc));
    *out = Copy(lpx::WhatIfToJson(result).dump(2) + "\n");
  });
}

lpx_status lpx_history_report(const char* jsonl_path, const lpx_history_options* options,
                              char** out) {
  if (jsonl_path == nullptr || out == nullptr) return Null("argument");
  lpx_history_options o{};
  if (options) o = *options;
  return Guard([&] {
    std::optional<std::vector<lpx::IntentEntry>> intent;
    if (o.intent_path) intent = lpx::LoadIntent(o.intent_path);
    std::optional<lpx::ExplanationDocument> live;
    if (o.live_path) live = lpx::Explain(lpx::LoadSnapshot(o.live_path));

    std::ifstream in(jsonl_path);
    if (!in) {
      throw lpx::Error(lpx::ErrorCode::kIoError, "history",
                       std::string("cannot open ") + jsonl_path);
    }
    lpx::HistoryAggregator agg;
    lpx::HistoryOptions ho;
    ho.jobs = o.jobs > 0 ? o.jobs : 0;
    lpx::StreamHistory(in, ho, [&](const lpx::HistoryRun& ids, lpx::IntervalRecord&& r) {
      agg.Add(ids, r);
    });
    lpx::HistoryReport report = agg.Finish(o.columns > 0 ? o.columns : 3);
    if (live) lpx::OverlayLive(report, *live, intent);
    switch (o.format) {
      case LPX_HISTORY_MARKDOWN: *out = Copy(lpx::RenderHistoryMarkdown(report)); break;
      case LPX_HISTORY_CSV: *out = Copy(lpx::RenderHistoryCsv(report)); break;
      default: *out = Copy(lpx::HistoryReportToJson(report).dump(2) + "\n"); break;
    }
  });
}

lpx_status lpx_server_create(const lpx_server_options* options, lpx_server** out) {
  if (options == nullptr || out == nullptr) return Null("argument");
  return Guard([&] {
    lpx::ServiceOptions o;
    if (options->host) o.host = options->host;
    o.port = options->port;
    if (options->history_path) o.history_path = options->history_path;
    if (options->intent_path) o.intent_path = options->intent_path;
    if (options->web_root) o.web_root = options->web_root;
    o.jobs = options->jobs;
    *out = new lpx_server{std::make_unique<lpx::Service>(std::move(o))};
  });
}

lpx_status lpx_server_start(lpx_server* server, int* port) {
  if (server == nullptr) return Null("server");
  return Guard([&] {
    const int bound = server->service->Start();
    if (port) *port = bound;
  });
}

lpx_status lpx_server_run(lpx_server* server) {
  if (server == nullptr) return Null("server");
  return Guard([&] { server->service->Run(); });
}

void lpx_server_stop(lpx_server* server) {
  if (server) server->service->Stop();
}

void lpx_server_free(lpx_server* server) { delete server; }

}  // extern "C"
