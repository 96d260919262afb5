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

// HTTP/JSON front end for the explain, what-if, sweep and history
// pipelines, plus the static dashboard assets.
//
//   POST /api/v1/explain          snapshot            -> explanation
//   POST /api/v1/whatif           {snapshot|base, overrides} -> {before, after, diff}
//   POST /api/v1/sweep            {snapshot, mvs, steps}     -> sweep result
//   POST /api/v1/live             snapshot            -> explanation + overlay
//   GET  /api/v1/history/summary                      -> history report
//   GET  /api/v1/health                               -> build info
//   GET  /                                            -> dashboard

#ifndef LPX_SERVICE_HPP_
#define LPX_SERVICE_HPP_

#include <memory>
#include <optional>
#include <string>

namespace lpx {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8087;  // 0 picks a free port
  std::optional<std::string> history_path;
  std::optional<std::string> intent_path;
  std::string web_root;  // empty: no static assets
  int columns = 3;
  int jobs = 0;
};

struct ServiceResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

class Service {
 public:
  // Loads the history and intent files up front; throws lpx::Error on
  // failure.
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Transport-independent dispatch of one API request.
  ServiceResponse Handle(const std::string& method, const std::string& path,
                         const std::string& body);

  // Binds and serves on a background thread; returns the bound port.
  int Start();
  // Binds and serves on the calling thread until Stop().
  void Run();
  void Stop();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

}  // namespace lpx

#endif  // LPX_SERVICE_HPP_
