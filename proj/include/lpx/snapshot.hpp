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

// Controller snapshot data model: one control interval's gains, costs,
// limits, current values and service flags.

#ifndef LPX_SNAPSHOT_HPP_
#define LPX_SNAPSHOT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "lpx/common.hpp"
#include "json.hpp"

namespace lpx {

enum class VariableKind { kMV, kCV };

struct VariableMeta {
  std::string id;
  VariableKind kind = VariableKind::kMV;
  int index = 0;
  bool in_service = true;
  std::optional<std::string> description;

  bool operator==(const VariableMeta&) const = default;
};

// Operating limits in engineering units. A missing side is +-infinity.
struct Bounds {
  double lower = -kInf;
  double upper = kInf;

  bool has_lower() const { return lower > -kInf; }
  bool has_upper() const { return upper < kInf; }
  bool pinned() const { return lower == upper; }
  bool operator==(const Bounds&) const = default;
};

// Row-major m x n steady-state gains, CV rows by MV columns.
using GainMatrix = Matrix;

struct ControllerSnapshot {
  std::string timestamp;
  std::vector<VariableMeta> mvs;
  std::vector<VariableMeta> cvs;
  GainMatrix gains;
  Vector costs;
  Vector mv_current;
  Vector cv_ss;
  std::vector<Bounds> mv_bounds;
  std::vector<Bounds> cv_bounds;
  std::vector<int> cv_rank;

  Index n() const { return static_cast<Index>(mvs.size()); }
  Index m() const { return static_cast<Index>(cvs.size()); }

  // Incremental limits: lower/upper limit minus the current value.
  // Out-of-service MVs are pinned at their current value (0, 0).
  Bounds mv_delta_bounds(Index i) const;
  Bounds cv_delta_bounds(Index j) const;

  std::optional<Index> FindMV(const std::string& id) const;
  std::optional<Index> FindCV(const std::string& id) const;

  bool operator==(const ControllerSnapshot& other) const;
};

struct Violation {
  ErrorCode code;
  std::string path;  // JSON-pointer-like location, e.g. "/cv_bounds/0"
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Checks every snapshot invariant and collects all violations. Returns an
// empty list for a valid snapshot.
std::vector<Violation> CheckSnapshot(const ControllerSnapshot& snapshot);

// Parses a snapshot document and validates it. Throws ValidationError
// carrying the full violation list, or Error(kParseError) for documents that
// are not shaped like a snapshot at all.
ControllerSnapshot ValidateSnapshot(const nlohmann::json& raw);
ControllerSnapshot ParseSnapshot(std::string_view text);
ControllerSnapshot LoadSnapshot(const std::string& path);

nlohmann::json SnapshotToJson(const ControllerSnapshot& snapshot);
std::string SerializeSnapshot(const ControllerSnapshot& snapshot);

}  // namespace lpx

#endif  // LPX_SNAPSHOT_HPP_
