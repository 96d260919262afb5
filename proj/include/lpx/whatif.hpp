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

// What-if analysis: explain a snapshot before and after a sparse set of
// limit, cost or service overrides and report what moved.

#ifndef LPX_WHATIF_HPP_
#define LPX_WHATIF_HPP_

#include <optional>
#include <string>
#include <vector>

#include "lpx/explain.hpp"

namespace lpx {

struct Override {
  std::string id;  // MV or CV id
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> cost;       // MVs only
  std::optional<bool> in_service;   // MVs only
};

// Parses [{"id", "lower"?, "upper"?, "cost"?, "in_service"?}]. A JSON null
// bound removes that side. Throws ValidationError.
std::vector<Override> ParseOverrides(const nlohmann::json& doc);

// Copy of `base` with the overrides applied. Throws ValidationError on an
// unknown id, a cost or service override on a CV, or lower > upper.
ControllerSnapshot ApplyOverrides(const ControllerSnapshot& base,
                                  const std::vector<Override>& overrides);

struct LabelChange {
  std::string id;
  std::string before;
  std::string after;
};

struct PairChange {
  std::string mv;
  std::string kind;  // "added" | "removed" | "rerouted"
  std::optional<std::string> before;  // "CV1-HI"
  std::optional<std::string> after;
};

struct LambdaChange {
  std::string cv;
  double before = 0.0;
  double after = 0.0;
};

struct WhatIfDiff {
  std::vector<PairChange> pairs;
  std::vector<LabelChange> mv_labels;   // "CV1-HI" -> "MV-LO"
  std::vector<LabelChange> cv_status;   // constraint side or feasibility
  std::vector<LambdaChange> lambda;

  bool empty() const {
    return pairs.empty() && mv_labels.empty() && cv_status.empty() && lambda.empty();
  }
};

struct WhatIfResult {
  ExplanationDocument before;
  ExplanationDocument after;
  WhatIfDiff diff;
};

WhatIfDiff DiffExplanations(const ExplanationDocument& before, const ExplanationDocument& after);
WhatIfResult RunWhatIf(const ControllerSnapshot& base, const std::vector<Override>& overrides);
nlohmann::json WhatIfToJson(const WhatIfResult& result);

}  // namespace lpx

#endif  // LPX_WHATIF_HPP_
