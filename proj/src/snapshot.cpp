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

#include "lpx/snapshot.hpp"

#include <cmath>
#include <cstring>
#include <set>
#include <sstream>

namespace lpx {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::kBoundOrderViolation: return "BoundOrderViolation";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kNoInServiceMV: return "NoInServiceMV";
    case ErrorCode::kIterationLimit: return "IterationLimit";
    case ErrorCode::kTooManyVariables: return "TooManyVariables";
    case ErrorCode::kNonSquareActiveSet: return "NonSquareActiveSet";
    case ErrorCode::kSingularActiveMatrix: return "SingularActiveMatrix";
    case ErrorCode::kDualMismatch: return "DualMismatch";
    case ErrorCode::kZeroColumn: return "ZeroColumn";
    case ErrorCode::kNotApplicable: return "NotApplicable";
    case ErrorCode::kOutOfOrderTimestamp: return "OutOfOrderTimestamp";
    case ErrorCode::kEmptyHistory: return "EmptyHistory";
    case ErrorCode::kIdMismatch: return "IdMismatch";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
  }
  return "Unknown";
}

ErrorClass ClassOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kTooManyVariables:
    case ErrorCode::kNotApplicable:
      return ErrorClass::kUsage;
    case ErrorCode::kIoError:
    case ErrorCode::kParseError:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kNonFiniteEntry:
    case ErrorCode::kBoundOrderViolation:
    case ErrorCode::kDuplicateId:
    case ErrorCode::kUnknownId:
      return ErrorClass::kInput;
    case ErrorCode::kUnbounded:
    case ErrorCode::kNoInServiceMV:
    case ErrorCode::kIterationLimit:
    case ErrorCode::kNonSquareActiveSet:
    case ErrorCode::kSingularActiveMatrix:
    case ErrorCode::kDualMismatch:
    case ErrorCode::kZeroColumn:
      return ErrorClass::kSolver;
    case ErrorCode::kOutOfOrderTimestamp:
    case ErrorCode::kEmptyHistory:
    case ErrorCode::kIdMismatch:
    case ErrorCode::kUnknownLabel:
      return ErrorClass::kHistory;
  }
  return ErrorClass::kInternal;
}

std::string Error::Describe() const {
  std::string out = stage_;
  out += ": ";
  out += ErrorCodeName(code_);
  out += ": ";
  out += what();
  return out;
}

namespace {

std::string JoinViolations(const std::vector<Violation>& violations) {
  std::ostringstream os;
  os << violations.size() << " violation(s)";
  for (const auto& v : violations) {
    os << "; " << ErrorCodeName(v.code) << " at " << v.path << ": "
       << v.message;
  }
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? ErrorCode::kInvalidArgument
                               : violations.front().code,
            "validate", JoinViolations(violations)),
      violations_(std::move(violations)) {}

Bounds ControllerSnapshot::mv_delta_bounds(Index i) const {
  if (!mvs[i].in_service) return {0.0, 0.0};
  const Bounds& b = mv_bounds[i];
  return {b.lower - mv_current[i], b.upper - mv_current[i]};
}

Bounds ControllerSnapshot::cv_delta_bounds(Index j) const {
  const Bounds& b = cv_bounds[j];
  return {b.lower - cv_ss[j], b.upper - cv_ss[j]};
}

std::optional<Index> ControllerSnapshot::FindMV(const std::string& id) const {
  for (Index i = 0; i < n(); ++i) {
    if (mvs[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<Index> ControllerSnapshot::FindCV(const std::string& id) const {
  for (Index j = 0; j < m(); ++j) {
    if (cvs[j].id == id) return j;
  }
  return std::nullopt;
}

bool ControllerSnapshot::operator==(const ControllerSnapshot& o) const {
  auto same = [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return false;
    for (Index k = 0; k < a.size(); ++k) {
      // Bit equality, so -0.0 vs 0.0 or NaN payloads are not papered over.
      if (std::memcmp(&a.data()[k], &b.data()[k], sizeof(double)) != 0)
        return false;
    }
    return true;
  };
  return timestamp == o.timestamp && mvs == o.mvs && cvs == o.cvs &&
         gains.rows() == o.gains.rows() && gains.cols() == o.gains.cols() &&
         same(gains.reshaped(), o.gains.reshaped()) && same(costs, o.costs) &&
         same(mv_current, o.mv_current) && same(cv_ss, o.cv_ss) &&
         mv_bounds == o.mv_bounds && cv_bounds == o.cv_bounds &&
         cv_rank == o.cv_rank;
}

std::vector<Violation> CheckSnapshot(const ControllerSnapshot& s) {
  std::vector<Violation> out;
  auto add = [&](ErrorCode code, std::string path, std::string message) {
    out.push_back({code, std::move(path), std::move(message)});
  };
  const auto n = static_cast<Index>(s.mvs.size());
  const auto m = static_cast<Index>(s.cvs.size());
  if (n < 1) add(ErrorCode::kDimensionMismatch, "/mvs", "at least one MV required");
  if (m < 1) add(ErrorCode::kDimensionMismatch, "/cvs", "at least one CV required");
  if (s.gains.rows() != m || s.gains.cols() != n) {
    add(ErrorCode::kDimensionMismatch, "/gains",
        "gains are " + std::to_string(s.gains.rows()) + "x" +
            std::to_string(s.gains.cols()) + ", expected " +
            std::to_string(m) + "x" + std::to_string(n));
  }
  auto check_len = [&](Index got, Index want, const char* path) {
    if (got != want) {
      add(ErrorCode::kDimensionMismatch, path,
          "length " + std::to_string(got) + ", expected " +
              std::to_string(want));
    }
  };
  check_len(s.costs.size(), n, "/costs");
  check_len(s.mv_current.size(), n, "/mv_current");
  check_len(static_cast<Index>(s.mv_bounds.size()), n, "/mv_bounds");
  check_len(s.cv_ss.size(), m, "/cv_ss");
  check_len(static_cast<Index>(s.cv_bounds.size()), m, "/cv_bounds");
  check_len(static_cast<Index>(s.cv_rank.size()), m, "/cv_rank");

  std::set<std::string> ids;
  auto check_meta = [&](const std::vector<VariableMeta>& metas,
                        VariableKind kind, const char* name) {
    for (std::size_t k = 0; k < metas.size(); ++k) {
      const auto& v = metas[k];
      const std::string path = std::string("/") + name + "/" + std::to_string(k);
      if (v.id.empty()) add(ErrorCode::kParseError, path + "/id", "empty id");
      if (!ids.insert(v.id).second) {
        add(ErrorCode::kDuplicateId, path + "/id", "duplicate id '" + v.id + "'");
      }
      if (v.kind != kind) add(ErrorCode::kParseError, path, "wrong variable kind");
      if (v.index != static_cast<int>(k)) {
        add(ErrorCode::kDimensionMismatch, path + "/index",
            "index " + std::to_string(v.index) + " at position " +
                std::to_string(k));
      }
    }
  };
  check_meta(s.mvs, VariableKind::kMV, "mvs");
  check_meta(s.cvs, VariableKind::kCV, "cvs");

  auto check_finite = [&](const Vector& v, const char* path) {
    for (Index k = 0; k < v.size(); ++k) {
      if (!std::isfinite(v[k])) {
        add(ErrorCode::kNonFiniteEntry, std::string(path) + "/" + std::to_string(k),
            "non-finite value");
      }
    }
  };
  for (Index r = 0; r < s.gains.rows(); ++r) {
    for (Index c = 0; c < s.gains.cols(); ++c) {
      if (!std::isfinite(s.gains(r, c))) {
        add(ErrorCode::kNonFiniteEntry,
            "/gains/" + std::to_string(r) + "/" + std::to_string(c),
            "non-finite gain");
      }
    }
  }
  check_finite(s.costs, "/costs");
  check_finite(s.mv_current, "/mv_current");
  check_finite(s.cv_ss, "/cv_ss");

  auto check_bounds = [&](const std::vector<Bounds>& bounds, const char* name) {
    for (std::size_t k = 0; k < bounds.size(); ++k) {
      const auto& b = bounds[k];
      const std::string path = std::string("/") + name + "/" + std::to_string(k);
      if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower == kInf ||
          b.upper == -kInf) {
        add(ErrorCode::kNonFiniteEntry, path, "bound is NaN or points the wrong way");
        continue;
      }
      if (b.lower > b.upper) {
        std::ostringstream os;
        os << "lower " << b.lower << " > upper " << b.upper;
        add(ErrorCode::kBoundOrderViolation, path, os.str());
      }
    }
  };
  check_bounds(s.mv_bounds, "mv_bounds");
  check_bounds(s.cv_bounds, "cv_bounds");

  for (std::size_t k = 0; k < s.cv_rank.size(); ++k) {
    if (s.cv_rank[k] < 1) {
      add(ErrorCode::kInvalidArgument, "/cv_rank/" + std::to_string(k),
          "rank must be a positive integer");
    }
  }
  return out;
}

}  // namespace lpx
