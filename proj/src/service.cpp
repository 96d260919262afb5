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

#include "lpx/service.hpp"

#include <fstream>
#include <mutex>
#include <thread>

#include "lpx/history.hpp"
#include "lpx/sensitivity.hpp"
#include "lpx/whatif.hpp"
// After Eigen: <resolv.h> defines a _res macro that collides with Eigen.
#include "httplib.h"

#ifndef LPX_VERSION
#define LPX_VERSION "unknown"
#endif

namespace lpx {

using nlohmann::json;

namespace {

ServiceResponse Json(int status, const json& body) { return {status, body.dump(), "application/json"}; }

ServiceResponse ErrorResponse(const Error& e) {
  int status = 500;
  switch (ClassOf(e.code())) {
    case ErrorClass::kUsage:
    case ErrorClass::kInput:
    case ErrorClass::kHistory: status = 422; break;
    case ErrorClass::kSolver: status = 409; break;
    case ErrorClass::kInternal: status = 500; break;
  }
  json body = {{"stage", e.stage()}, {"code", ErrorCodeName(e.code())}, {"detail", e.what()}};
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    json list = json::array();
    for (const Violation& x : v->violations()) {
      list.push_back({{"code", ErrorCodeName(x.code)}, {"path", x.path}, {"message", x.message}});
    }
    body["violations"] = std::move(list);
  }
  return Json(status, {{"error", std::move(body)}});
}

json ParseBody(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, "request", std::string("malformed JSON body: ") + e.what());
  }
}

int MvIndex(const ControllerSnapshot& s, const json& v) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    if (auto i = s.FindMV(v.get<std::string>())) return static_cast<int>(*i);
    throw Error(ErrorCode::kUnknownId, "request", "unknown MV '" + v.get<std::string>() + "'");
  }
  throw Error(ErrorCode::kInvalidArgument, "request", "mvs entries must be indices or ids");
}

}  // namespace

struct Service::State {
  ServiceOptions options;
  std::optional<HistoryReport> report;
  std::optional<ControllerSnapshot> latest;
  std::optional<std::vector<IntentEntry>> intent;
  std::mutex live_mutex;
  std::shared_ptr<const ExplanationDocument> live;
  httplib::Server server;
  std::thread thread;

  ServiceResponse Explain(const json& body) {
    const ExplanationDocument doc = lpx::Explain(ValidateSnapshot(body));
    return Json(200, ExplanationToJson(doc));
  }

  ServiceResponse WhatIf(const json& body) {
    if (!body.is_object()) throw Error(ErrorCode::kParseError, "request", "expected an object");
    ControllerSnapshot base;
    if (body.contains("snapshot")) {
      base = ValidateSnapshot(body["snapshot"]);
    } else if (body.value("base", "") == "latest") {
      if (!latest) throw Error(ErrorCode::kInvalidArgument, "request", "no history loaded");
      base = *latest;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "request",
                  "give an inline \"snapshot\" or \"base\": \"latest\"");
    }
    const auto overrides = ParseOverrides(body.contains("overrides") ? body["overrides"] : json());
    return Json(200, WhatIfToJson(RunWhatIf(base, overrides)));
  }

  ServiceResponse Sweep(const json& body) {
    if (!body.is_object() || !body.contains("snapshot")) {
      throw Error(ErrorCode::kParseError, "request", "expected {snapshot, mvs, steps}");
    }
    const ControllerSnapshot s = ValidateSnapshot(body["snapshot"]);
    const json mvs = body.value("mvs", json::array({0, 1}));
    if (!mvs.is_array() || mvs.size() != 2) {
      throw Error(ErrorCode::kInvalidArgument, "request", "mvs must name two MVs");
    }
    const int steps = body.value("steps", 360);
    return Json(200, SweepToJson(SweepCostRatio(s, MvIndex(s, mvs[0]), MvIndex(s, mvs[1]), steps)));
  }

  ServiceResponse Live(const json& body) {
    auto doc = std::make_shared<const ExplanationDocument>(lpx::Explain(ValidateSnapshot(body)));
    json out = {{"schema_version", kExplanationSchema},
                {"timestamp", doc->timestamp},
                {"explanation", ExplanationToJson(*doc)}};
    if (report) {
      HistoryReport annotated = *report;
      OverlayLive(annotated, *doc, intent);
      out["overlay"] = HistoryReportToJson(annotated)["overlay"];
    } else {
      out["overlay"] = nullptr;
    }
    {
      std::lock_guard<std::mutex> lock(live_mutex);
      live = std::move(doc);
    }
    return Json(200, out);
  }

  ServiceResponse Summary() {
    if (!report) {
      return Json(404, {{"error", {{"stage", "service"}, {"code", "NotFound"}, {"detail", "no history loaded"}}}});
    }
    std::shared_ptr<const ExplanationDocument> current;
    {
      std::lock_guard<std::mutex> lock(live_mutex);
      current = live;
    }
    HistoryReport annotated = *report;
    if (current) OverlayLive(annotated, *current, intent);
    return Json(200, HistoryReportToJson(annotated));
  }

  ServiceResponse Health() {
    return Json(200, {{"status", "ok"},
                      {"version", LPX_VERSION},
                      {"explanation_schema", kExplanationSchema},
                      {"history_loaded", report.has_value()},
                      {"intent_configured", intent.has_value()}});
  }
};

Service::Service(ServiceOptions options) : state_(std::make_unique<State>()) {
  state_->options = std::move(options);
  const ServiceOptions& o = state_->options;
  if (o.intent_path) state_->intent = LoadIntent(*o.intent_path);
  if (o.history_path) {
    std::ifstream in(*o.history_path);
    if (!in) throw Error(ErrorCode::kIoError, "service", "cannot open " + *o.history_path);
    HistoryAggregator agg;
    StreamHistory(in, {.jobs = o.jobs}, [&](const HistoryRun& ids, IntervalRecord&& r) {
      agg.Add(ids, r);
    });
    state_->report = agg.Finish(o.columns);
    // Keep the last interval as the default what-if base.
    std::ifstream again(*o.history_path);
    std::string line, last;
    while (std::getline(again, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) last = line;
    }
    state_->latest = ParseSnapshot(last);
  }
}

Service::~Service() { Stop(); }

ServiceResponse Service::Handle(const std::string& method, const std::string& path,
                                const std::string& body) {
  try {
    if (method == "GET" && path == "/api/v1/health") return state_->Health();
    if (method == "GET" && path == "/api/v1/history/summary") return state_->Summary();
    if (method == "POST") {
      if (path == "/api/v1/explain") return state_->Explain(ParseBody(body));
      if (path == "/api/v1/whatif") return state_->WhatIf(ParseBody(body));
      if (path == "/api/v1/sweep") return state_->Sweep(ParseBody(body));
      if (path == "/api/v1/live") return state_->Live(ParseBody(body));
    }
    return Json(404, {{"error", {{"stage", "service"}, {"code", "NotFound"}, {"detail", method + " " + path}}}});
  } catch (const Error& e) {
    return ErrorResponse(e);
  } catch (const std::exception& e) {
    return Json(500, {{"error", {{"stage", "service"}, {"code", "Internal"}, {"detail", e.what()}}}});
  }
}

int Service::Start() {
  auto& server = state_->server;
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    const ServiceResponse r = Handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get("/api/v1/.*", forward);
  server.Post("/api/v1/.*", forward);
  if (!state_->options.web_root.empty()) {
    server.set_mount_point("/", state_->options.web_root);
  }
  int port = state_->options.port;
  if (port == 0) {
    port = server.bind_to_any_port(state_->options.host);
  } else if (!server.bind_to_port(state_->options.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(ErrorCode::kIoError, "service",
                "cannot bind " + state_->options.host + ":" + std::to_string(state_->options.port));
  }
  state_->thread = std::thread([&server] { server.listen_after_bind(); });
  server.wait_until_ready();
  return port;
}

void Service::Run() {
  Start();
  if (state_->thread.joinable()) state_->thread.join();
}

void Service::Stop() {
  if (!state_) return;
  state_->server.stop();
  if (state_->thread.joinable() && state_->thread.get_id() != std::this_thread::get_id()) {
    state_->thread.join();
  }
}

}  // namespace lpx
