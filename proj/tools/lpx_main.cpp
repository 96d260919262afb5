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

// lpx: command-line front end over the liblpx C API.
//
//   lpx explain <file> [--format json|table] [-o path]
//   lpx history <file.jsonl> [--intent f] [--live f] [--columns 3]
//               [--format json|md|csv] [--jobs N] [-o path]
//   lpx sweep <file> --mvs i,j [--steps 360] [--format json|csv] [-o path]
//   lpx whatif <file> [--overrides f] [-o path]
//   lpx serve [--host h] [--port 8087] [--history f] [--intent f] [--web dir]
//
// Exit codes: 0 success, 2 usage/input/history error, 3 solver error.
// LPX_LOG=quiet|error|warn|info|debug sets stderr verbosity (default warn).

#include <pthread.h>
#include <signal.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lpx/lpx.h"

namespace {

enum class LogLevel { kQuiet, kError, kWarn, kInfo, kDebug };

LogLevel g_log = LogLevel::kWarn;

LogLevel LogLevelFromEnv() {
  const char* v = std::getenv("LPX_LOG");
  if (v == nullptr) return LogLevel::kWarn;
  static const std::map<std::string, LogLevel> kLevels = {
      {"quiet", LogLevel::kQuiet}, {"error", LogLevel::kError}, {"warn", LogLevel::kWarn},
      {"info", LogLevel::kInfo},   {"debug", LogLevel::kDebug}};
  auto it = kLevels.find(v);
  return it == kLevels.end() ? LogLevel::kWarn : it->second;
}

void Log(LogLevel level, const std::string& message) {
  if (level > g_log || g_log == LogLevel::kQuiet) return;
  static const char* kNames[] = {"", "error", "warning", "info", "debug"};
  std::cerr << "lpx: " << kNames[static_cast<int>(level)] << ": " << message << "\n";
}

int ExitCode(lpx_status s) {
  switch (s) {
    case LPX_OK: return 0;
    case LPX_ERR_SOLVER: return 3;
    case LPX_ERR_USAGE:
    case LPX_ERR_INPUT:
    case LPX_ERR_HISTORY: return 2;
    case LPX_ERR_INTERNAL: break;
  }
  return 1;
}

int Fail(lpx_status s) {
  Log(LogLevel::kError, lpx_last_error());
  return ExitCode(s);
}

// Owns a string returned by the C API.
struct CString {
  char* p = nullptr;
  ~CString() { lpx_string_free(p); }
};

int Emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    Log(LogLevel::kError, "cli: IoError: cannot write " + path);
    return 2;
  }
  return 0;
}

struct Snapshot {
  lpx_snapshot* p = nullptr;
  ~Snapshot() { lpx_snapshot_free(p); }
};

struct ExplainArgs {
  std::string file;
  std::string format = "json";
  std::string output;
};

int CmdExplain(const ExplainArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  Snapshot snap;
  if (lpx_status s = lpx_snapshot_load(a.file.c_str(), &snap.p)) return Fail(s);
  lpx_explanation* doc = nullptr;
  if (lpx_status s = lpx_explain(snap.p, &doc)) return Fail(s);
  for (int i = 0; i < lpx_explanation_warning_count(doc); ++i) {
    Log(LogLevel::kWarn, lpx_explanation_warning(doc, i));
  }
  CString text;
  lpx_status s = a.format == "table" ? lpx_explanation_table(doc, &text.p)
                                     : lpx_explanation_json(doc, &text.p);
  lpx_explanation_free(doc);
  if (s) return Fail(s);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  Log(LogLevel::kInfo, "explained " + a.file + " in " + std::to_string(ms) + " ms");
  return Emit(text.p, a.output);
}

struct HistoryArgs {
  std::string file;
  std::string intent;
  std::string live;
  int columns = 3;
  std::string format = "md";
  int jobs = 0;
  std::string output;
};

int CmdHistory(const HistoryArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  lpx_history_options o{};
  o.intent_path = a.intent.empty() ? nullptr : a.intent.c_str();
  o.live_path = a.live.empty() ? nullptr : a.live.c_str();
  o.columns = a.columns;
  o.jobs = a.jobs;
  o.format = a.format == "json" ? LPX_HISTORY_JSON
             : a.format == "csv" ? LPX_HISTORY_CSV
                                 : LPX_HISTORY_MARKDOWN;
  CString text;
  if (lpx_status s = lpx_history_report(a.file.c_str(), &o, &text.p)) return Fail(s);
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Log(LogLevel::kInfo, "history " + a.file + " in " + std::to_string(sec) + " s");
  return Emit(text.p, a.output);
}

struct SweepArgs {
  std::string file;
  std::string mvs;
  int steps = 360;
  std::string format = "json";
  std::string output;
};

int CmdSweep(const SweepArgs& a) {
  Snapshot snap;
  if (lpx_status s = lpx_snapshot_load(a.file.c_str(), &snap.p)) return Fail(s);
  const auto comma = a.mvs.find(',');
  if (comma == std::string::npos) {
    Log(LogLevel::kError, "cli: InvalidArgument: --mvs expects i,j");
    return 2;
  }
  int i = 0, j = 0;
  if (lpx_status s = lpx_snapshot_mv_index(snap.p, a.mvs.substr(0, comma).c_str(), &i)) return Fail(s);
  if (lpx_status s = lpx_snapshot_mv_index(snap.p, a.mvs.substr(comma + 1).c_str(), &j)) return Fail(s);
  CString json, csv;
  if (lpx_status s = lpx_sweep(snap.p, i, j, a.steps, &json.p, &csv.p)) return Fail(s);
  return Emit(a.format == "csv" ? csv.p : json.p, a.output);
}

struct WhatIfArgs {
  std::string file;
  std::string overrides;
  std::string output;
};

int CmdWhatIf(const WhatIfArgs& a) {
  Snapshot snap;
  if (lpx_status s = lpx_snapshot_load(a.file.c_str(), &snap.p)) return Fail(s);
  std::string body = "[]";
  if (!a.overrides.empty()) {
    std::ifstream in(a.overrides);
    if (!in) {
      Log(LogLevel::kError, "cli: IoError: cannot open " + a.overrides);
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  CString text;
  if (lpx_status s = lpx_whatif(snap.p, body.c_str(), &text.p)) return Fail(s);
  return Emit(text.p, a.output);
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8087;
  std::string history;
  std::string intent;
  std::string web;
  int jobs = 0;
};

int CmdServe(const ServeArgs& a) {
  lpx_server_options o{};
  o.host = a.host.c_str();
  o.port = a.port;
  o.history_path = a.history.empty() ? nullptr : a.history.c_str();
  o.intent_path = a.intent.empty() ? nullptr : a.intent.c_str();
  o.web_root = a.web.empty() ? nullptr : a.web.c_str();
  o.jobs = a.jobs;
  // Block the stop signals before any worker thread exists so that only
  // sigwait below receives them.
  sigset_t stop;
  sigemptyset(&stop);
  sigaddset(&stop, SIGINT);
  sigaddset(&stop, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop, nullptr);
  lpx_server* server = nullptr;
  if (lpx_status s = lpx_server_create(&o, &server)) return Fail(s);
  int port = 0;
  if (lpx_status s = lpx_server_start(server, &port)) {
    lpx_server_free(server);
    return Fail(s);
  }
  Log(LogLevel::kInfo, "serving on " + a.host + ":" + std::to_string(port));
  int signal = 0;
  sigwait(&stop, &signal);
  Log(LogLevel::kInfo, "stopping");
  lpx_server_stop(server);
  lpx_server_free(server);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  g_log = LogLevelFromEnv();
  CLI::App app{"Explain MPC steady-state target solutions as MV-CV pairings", "lpx"};
  app.set_version_flag("--version", lpx_version());
  app.require_subcommand(1, 1);

  ExplainArgs ex;
  auto* explain = app.add_subcommand("explain", "Explain one controller snapshot");
  explain->add_option("file", ex.file, "Snapshot JSON")->required();
  explain->add_option("--format", ex.format)->check(CLI::IsMember({"json", "table"}));
  explain->add_option("-o,--output", ex.output, "Output path (default stdout)");

  HistoryArgs hi;
  auto* history = app.add_subcommand("history", "Aggregate pairing occupancy over a history");
  history->add_option("file", hi.file, "JSON-Lines snapshot history")->required();
  history->add_option("--intent", hi.intent, "Intended pairings JSON");
  history->add_option("--live", hi.live, "Live snapshot to overlay");
  history->add_option("--columns", hi.columns)->check(CLI::Range(1, 64));
  history->add_option("--format", hi.format)->check(CLI::IsMember({"json", "md", "csv"}));
  history->add_option("--jobs", hi.jobs, "Worker threads (default: logical cores)")
      ->check(CLI::NonNegativeNumber);
  history->add_option("-o,--output", hi.output);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Sweep the cost angle of two MVs");
  sweep->add_option("file", sw.file, "Snapshot JSON")->required();
  sweep->add_option("--mvs", sw.mvs, "Two MV ids or indices, e.g. 0,1")->required();
  sweep->add_option("--steps", sw.steps);
  sweep->add_option("--format", sw.format)->check(CLI::IsMember({"json", "csv"}));
  sweep->add_option("-o,--output", sw.output);

  WhatIfArgs wi;
  auto* whatif = app.add_subcommand("whatif", "Compare a snapshot with limit or cost overrides");
  whatif->add_option("file", wi.file, "Snapshot JSON")->required();
  whatif->add_option("--overrides", wi.overrides, "Overrides JSON list");
  whatif->add_option("-o,--output", wi.output);

  ServeArgs sv;
  auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve->add_option("--host", sv.host);
  serve->add_option("--port", sv.port)->check(CLI::Range(0, 65535));
  serve->add_option("--history", sv.history);
  serve->add_option("--intent", sv.intent);
  serve->add_option("--web", sv.web, "Static asset directory");
  serve->add_option("--jobs", sv.jobs)->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*explain) return CmdExplain(ex);
  if (*history) return CmdHistory(hi);
  if (*sweep) return CmdSweep(sw);
  if (*whatif) return CmdWhatIf(wi);
  return CmdServe(sv);
}
