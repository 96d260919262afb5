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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lpx/snapshot.hpp"

namespace lpx {
namespace {

using nlohmann::json;

constexpr const char* kTopLevelKeys[] = {"timestamp", "mvs",        "cvs",
                                         "gains",     "costs",      "mv_current",
                                         "cv_ss",     "mv_bounds",  "cv_bounds"};

// Collects shape problems while reading so that one pass reports all of them.
class Reader {
 public:
  explicit Reader(std::vector<Violation>& out) : out_(out) {}

  void Add(ErrorCode code, std::string path, std::string message) {
    out_.push_back({code, std::move(path), std::move(message)});
  }

  double Number(const json& v, const std::string& path) {
    if (v.is_number()) {
      const double x = v.get<double>();
      if (!std::isfinite(x)) Add(ErrorCode::kNonFiniteEntry, path, "non-finite number");
      return x;
    }
    if (v.is_null()) {
      Add(ErrorCode::kNonFiniteEntry, path, "null where a number is required");
    } else {
      Add(ErrorCode::kParseError, path, "expected a number");
    }
    return std::nan("");
  }

  Vector NumberArray(const json& v, const std::string& path) {
    if (!v.is_array()) {
      Add(ErrorCode::kParseError, path, "expected an array of numbers");
      return Vector();
    }
    Vector out(static_cast<Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k) {
      out[static_cast<Index>(k)] = Number(v[k], path + "/" + std::to_string(k));
    }
    return out;
  }

  Bounds ReadBounds(const json& v, const std::string& path) {
    Bounds b;
    auto side = [&](const char* key, double missing) {
      if (!v.contains(key) || v.at(key).is_null()) return missing;
      const json& x = v.at(key);
      if (!x.is_number()) {
        Add(ErrorCode::kParseError, path + "/" + key, "expected a number or null");
        return std::nan("");
      }
      const double d = x.get<double>();
      if (!std::isfinite(d)) {
        Add(ErrorCode::kNonFiniteEntry, path + "/" + key, "non-finite bound");
      }
      return d;
    };
    if (!v.is_object()) {
      Add(ErrorCode::kParseError, path, "expected {\"lower\": .., \"upper\": ..}");
      return b;
    }
    b.lower = side("lower", -kInf);
    b.upper = side("upper", kInf);
    return b;
  }

  std::vector<Bounds> BoundsArray(const json& v, const std::string& path) {
    std::vector<Bounds> out;
    if (!v.is_array()) {
      Add(ErrorCode::kParseError, path, "expected an array of bounds");
      return out;
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
      out.push_back(ReadBounds(v[k], path + "/" + std::to_string(k)));
    }
    return out;
  }

  std::vector<VariableMeta> Metas(const json& v, VariableKind kind,
                                  const std::string& path) {
    std::vector<VariableMeta> out;
    if (!v.is_array()) {
      Add(ErrorCode::kParseError, path, "expected an array of variables");
      return out;
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
      const std::string p = path + "/" + std::to_string(k);
      const json& e = v[k];
      VariableMeta meta;
      meta.kind = kind;
      meta.index = static_cast<int>(k);
      if (e.is_string()) {
        meta.id = e.get<std::string>();
        out.push_back(std::move(meta));
        continue;
      }
      if (!e.is_object() || !e.contains("id") || !e.at("id").is_string()) {
        Add(ErrorCode::kParseError, p, "expected {\"id\": string, ...}");
        out.push_back(std::move(meta));
        continue;
      }
      meta.id = e.at("id").get<std::string>();
      if (e.contains("index")) {
        if (e.at("index").is_number_integer()) {
          meta.index = e.at("index").get<int>();
        } else {
          Add(ErrorCode::kParseError, p + "/index", "expected an integer");
        }
      }
      if (e.contains("in_service")) {
        if (e.at("in_service").is_boolean()) {
          meta.in_service = e.at("in_service").get<bool>();
        } else {
          Add(ErrorCode::kParseError, p + "/in_service", "expected a boolean");
        }
      }
      if (e.contains("description") && e.at("description").is_string()) {
        meta.description = e.at("description").get<std::string>();
      }
      out.push_back(std::move(meta));
    }
    return out;
  }

 private:
  std::vector<Violation>& out_;
};

// Returns the permutation that sorts variables by their declared index, or
// an empty vector when the indices are not a permutation of 0..count-1.
std::vector<std::size_t> IndexOrder(const std::vector<VariableMeta>& metas) {
  std::vector<std::size_t> order(metas.size());
  std::vector<bool> seen(metas.size(), false);
  for (std::size_t k = 0; k < metas.size(); ++k) {
    const int idx = metas[k].index;
    if (idx < 0 || static_cast<std::size_t>(idx) >= metas.size() || seen[idx]) {
      return {};
    }
    seen[idx] = true;
    order[idx] = k;
  }
  return order;
}

json BoundsToJson(const Bounds& b) {
  json out = json::object();
  out["lower"] = b.has_lower() ? json(b.lower) : json(nullptr);
  out["upper"] = b.has_upper() ? json(b.upper) : json(nullptr);
  return out;
}

json MetaToJson(const VariableMeta& v) {
  json out = {{"id", v.id}, {"index", v.index}, {"in_service", v.in_service}};
  if (v.description) out["description"] = *v.description;
  return out;
}

json VectorToJson(const Vector& v) {
  json out = json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
  return out;
}

}  // namespace

ControllerSnapshot ValidateSnapshot(const json& raw) {
  if (!raw.is_object()) {
    throw Error(ErrorCode::kParseError, "validate",
                "snapshot document must be a JSON object");
  }
  std::vector<Violation> violations;
  Reader rd(violations);
  for (const char* key : kTopLevelKeys) {
    if (!raw.contains(key)) {
      rd.Add(ErrorCode::kParseError, std::string("/") + key, "missing key");
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));

  ControllerSnapshot s;
  if (raw.at("timestamp").is_string()) {
    s.timestamp = raw.at("timestamp").get<std::string>();
  } else {
    rd.Add(ErrorCode::kParseError, "/timestamp", "expected an ISO-8601 string");
  }
  s.mvs = rd.Metas(raw.at("mvs"), VariableKind::kMV, "/mvs");
  s.cvs = rd.Metas(raw.at("cvs"), VariableKind::kCV, "/cvs");

  const json& gains = raw.at("gains");
  const auto m = static_cast<Index>(s.cvs.size());
  const auto n = static_cast<Index>(s.mvs.size());
  if (!gains.is_array()) {
    rd.Add(ErrorCode::kParseError, "/gains", "expected an array of rows");
  } else {
    if (static_cast<Index>(gains.size()) != m) {
      rd.Add(ErrorCode::kDimensionMismatch, "/gains",
             std::to_string(gains.size()) + " gain rows for " +
                 std::to_string(m) + " CVs");
    }
    bool ragged = false;
    for (std::size_t r = 0; r < gains.size(); ++r) {
      if (!gains[r].is_array() || static_cast<Index>(gains[r].size()) != n) {
        rd.Add(ErrorCode::kDimensionMismatch, "/gains/" + std::to_string(r),
               "gain row length differs from MV count " + std::to_string(n));
        ragged = true;
      }
    }
    if (!ragged && static_cast<Index>(gains.size()) == m) {
      s.gains.resize(m, n);
      for (Index r = 0; r < m; ++r) {
        for (Index c = 0; c < n; ++c) {
          s.gains(r, c) = rd.Number(gains[r][c], "/gains/" + std::to_string(r) +
                                                    "/" + std::to_string(c));
        }
      }
    }
  }
  s.costs = rd.NumberArray(raw.at("costs"), "/costs");
  s.mv_current = rd.NumberArray(raw.at("mv_current"), "/mv_current");
  s.cv_ss = rd.NumberArray(raw.at("cv_ss"), "/cv_ss");
  s.mv_bounds = rd.BoundsArray(raw.at("mv_bounds"), "/mv_bounds");
  s.cv_bounds = rd.BoundsArray(raw.at("cv_bounds"), "/cv_bounds");
  if (raw.contains("cv_rank") && !raw.at("cv_rank").is_null()) {
    const json& ranks = raw.at("cv_rank");
    if (!ranks.is_array()) {
      rd.Add(ErrorCode::kParseError, "/cv_rank", "expected an array of integers");
    } else {
      for (std::size_t k = 0; k < ranks.size(); ++k) {
        if (ranks[k].is_number_integer()) {
          s.cv_rank.push_back(ranks[k].get<int>());
        } else {
          rd.Add(ErrorCode::kParseError, "/cv_rank/" + std::to_string(k),
                 "expected an integer");
          s.cv_rank.push_back(1);
        }
      }
    }
  } else {
    s.cv_rank.assign(s.cvs.size(), 1);
  }

  // Declared indices may list variables in any order; everything positional
  // follows the index, so reorder the metadata lists to match.
  auto reorder = [&](std::vector<VariableMeta>& metas, const char* path) {
    auto order = IndexOrder(metas);
    if (order.empty() && !metas.empty()) {
      rd.Add(ErrorCode::kDimensionMismatch, path,
             "indices do not form a contiguous 0..count-1 range");
      return;
    }
    std::vector<VariableMeta> sorted;
    sorted.reserve(metas.size());
    for (std::size_t k : order) sorted.push_back(metas[k]);
    metas = std::move(sorted);
  };
  reorder(s.mvs, "/mvs");
  reorder(s.cvs, "/cvs");

  for (auto& v : CheckSnapshot(s)) {
    // Shape problems found while reading already explain these.
    const bool dup = std::any_of(violations.begin(), violations.end(),
                                 [&](const Violation& x) {
                                   return x.path == v.path && x.code == v.code;
                                 });
    if (!dup) violations.push_back(std::move(v));
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return s;
}

ControllerSnapshot ParseSnapshot(std::string_view text) {
  json raw;
  try {
    raw = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, "validate", e.what());
  }
  return ValidateSnapshot(raw);
}

ControllerSnapshot LoadSnapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "io", "cannot open snapshot file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseSnapshot(buf.str());
}

json SnapshotToJson(const ControllerSnapshot& s) {
  json out = json::object();
  out["timestamp"] = s.timestamp;
  out["mvs"] = json::array();
  for (const auto& v : s.mvs) out["mvs"].push_back(MetaToJson(v));
  out["cvs"] = json::array();
  for (const auto& v : s.cvs) out["cvs"].push_back(MetaToJson(v));
  out["gains"] = json::array();
  for (Index r = 0; r < s.gains.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < s.gains.cols(); ++c) row.push_back(s.gains(r, c));
    out["gains"].push_back(std::move(row));
  }
  out["costs"] = VectorToJson(s.costs);
  out["mv_current"] = VectorToJson(s.mv_current);
  out["cv_ss"] = VectorToJson(s.cv_ss);
  out["mv_bounds"] = json::array();
  for (const auto& b : s.mv_bounds) out["mv_bounds"].push_back(BoundsToJson(b));
  out["cv_bounds"] = json::array();
  for (const auto& b : s.cv_bounds) out["cv_bounds"].push_back(BoundsToJson(b));
  out["cv_rank"] = s.cv_rank;
  return out;
}

std::string SerializeSnapshot(const ControllerSnapshot& s) {
  return SnapshotToJson(s).dump();
}

}  // namespace lpx
