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

#include "lpx/whatif.hpp"

#include <cmath>

#include "lpx/history.hpp"

namespace lpx {

using nlohmann::json;

namespace {

constexpr double kLambdaChange = 1e-9;

std::optional<double> Limit(const json& v, const std::string& path,
                            std::vector<Violation>& problems) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) {
    problems.push_back({ErrorCode::kParseError, path, "expected a number or null"});
    return std::nullopt;
  }
  return v.get<double>();
}

}  // namespace

std::vector<Override> ParseOverrides(const json& doc) {
  std::vector<Violation> problems;
  std::vector<Override> out;
  if (doc.is_null()) return out;
  if (!doc.is_array()) {
    throw ValidationError({{ErrorCode::kParseError, "/overrides", "expected an array"}});
  }
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const json& e = doc[k];
    const std::string path = "/overrides/" + std::to_string(k);
    if (!e.is_object() || !e.contains("id") || !e["id"].is_string()) {
      problems.push_back({ErrorCode::kParseError, path, "expected an object with a string id"});
      continue;
    }
    Override o;
    o.id = e["id"].get<std::string>();
    // A present-but-null bound clears that side; record it as +-inf.
    if (e.contains("lower")) o.lower = Limit(e["lower"], path + "/lower", problems).value_or(-kInf);
    if (e.contains("upper")) o.upper = Limit(e["upper"], path + "/upper", problems).value_or(kInf);
    if (e.contains("cost")) {
      if (e["cost"].is_number()) o.cost = e["cost"].get<double>();
      else problems.push_back({ErrorCode::kParseError, path + "/cost", "expected a number"});
    }
    if (e.contains("in_service")) {
      if (e["in_service"].is_boolean()) o.in_service = e["in_service"].get<bool>();
      else problems.push_back({ErrorCode::kParseError, path + "/in_service", "expected a boolean"});
    }
    out.push_back(std::move(o));
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return out;
}

ControllerSnapshot ApplyOverrides(const ControllerSnapshot& base,
                                  const std::vector<Override>& overrides) {
  ControllerSnapshot s = base;
  std::vector<Violation> problems;
  for (std::size_t k = 0; k < overrides.size(); ++k) {
    const Override& o = overrides[k];
    const std::string path = "/overrides/" + std::to_string(k);
    Bounds* bounds = nullptr;
    if (auto i = s.FindMV(o.id)) {
      bounds = &s.mv_bounds[*i];
      if (o.cost) s.costs[*i] = *o.cost;
      if (o.in_service) s.mvs[*i].in_service = *o.in_service;
    } else if (auto j = s.FindCV(o.id)) {
      bounds = &s.cv_bounds[*j];
      if (o.cost || o.in_service) {
        problems.push_back({ErrorCode::kInvalidArgument, path,
                            "cost and in_service overrides apply to MVs only"});
      }
    } else {
      problems.push_back({ErrorCode::kUnknownId, path + "/id", "unknown variable '" + o.id + "'"});
      continue;
    }
    if (o.lower) bounds->lower = *o.lower;
    if (o.upper) bounds->upper = *o.upper;
    if (o.cost && !std::isfinite(*o.cost)) {
      problems.push_back({ErrorCode::kNonFiniteEntry, path + "/cost", "cost must be finite"});
    }
    if (bounds->lower > bounds->upper) {
      problems.push_back({ErrorCode::kBoundOrderViolation, path, "lower exceeds upper for " + o.id});
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  auto remaining = CheckSnapshot(s);
  if (!remaining.empty()) throw ValidationError(std::move(remaining));
  return s;
}

WhatIfDiff DiffExplanations(const ExplanationDocument& before, const ExplanationDocument& after) {
  WhatIfDiff diff;
  const IntervalRecord a = MakeRecord(before);
  const IntervalRecord b = MakeRecord(after);
  for (std::size_t i = 0; i < before.mvs.size(); ++i) {
    const MvLabel& la = a.mv_labels[i];
    const MvLabel& lb = b.mv_labels[i];
    if (!(la == lb)) diff.mv_labels.push_back({before.mvs[i].id, la.Text(), lb.Text()});
    const bool pa = la.kind == LabelKind::kPaired;
    const bool pb = lb.kind == LabelKind::kPaired;
    if (pa && pb && !(la == lb)) {
      diff.pairs.push_back({before.mvs[i].id, "rerouted", la.Text(), lb.Text()});
    } else if (pa && !pb) {
      diff.pairs.push_back({before.mvs[i].id, "removed", la.Text(), std::nullopt});
    } else if (!pa && pb) {
      diff.pairs.push_back({before.mvs[i].id, "added", std::nullopt, lb.Text()});
    }
  }
  for (std::size_t j = 0; j < before.cvs.size(); ++j) {
    const ConstraintStatus sa = before.solution.cv_status[j];
    const ConstraintStatus sb = after.solution.cv_status[j];
    if (sa != sb) {
      diff.cv_status.push_back({before.cvs[j].id, std::string(StatusName(sa)), std::string(StatusName(sb))});
    }
    const double la = before.solution.lambda[j], lb = after.solution.lambda[j];
    if (std::abs(la - lb) > kLambdaChange * std::max(1.0, std::max(std::abs(la), std::abs(lb)))) {
      diff.lambda.push_back({before.cvs[j].id, la, lb});
    }
  }
  return diff;
}

WhatIfResult RunWhatIf(const ControllerSnapshot& base, const std::vector<Override>& overrides) {
  WhatIfResult result;
  const ControllerSnapshot modified = ApplyOverrides(base, overrides);
  result.before = Explain(base);
  result.after = Explain(modified);
  result.diff = DiffExplanations(result.before, result.after);
  return result;
}

json WhatIfToJson(const WhatIfResult& result) {
  auto opt = [](const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); };
  json pairs = json::array(), labels = json::array(), cvs = json::array(), lambda = json::array();
  for (const PairChange& p : result.diff.pairs) {
    pairs.push_back({{"mv", p.mv}, {"kind", p.kind}, {"before", opt(p.before)}, {"after", opt(p.after)}});
  }
  for (const LabelChange& c : result.diff.mv_labels) {
    labels.push_back({{"mv", c.id}, {"before", c.before}, {"after", c.after}});
  }
  for (const LabelChange& c : result.diff.cv_status) {
    cvs.push_back({{"cv", c.id}, {"before", c.before}, {"after", c.after}});
  }
  for (const LambdaChange& c : result.diff.lambda) {
    lambda.push_back({{"cv", c.cv}, {"before", c.before}, {"after", c.after}});
  }
  return {{"schema_version", kExplanationSchema},
          {"before", ExplanationToJson(result.before)},
          {"after", ExplanationToJson(result.after)},
          {"diff",
           {{"empty", result.diff.empty()},
            {"pairs", std::move(pairs)},
            {"mv_labels", std::move(labels)},
            {"cv_status", std::move(cvs)},
            {"lambda", std::move(lambda)}}}};
}

}  // namespace lpx
