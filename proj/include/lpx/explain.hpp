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

// The explain pipeline: solve, partition, invert, attribute, normalize,
// penalize, assign. The resulting document is the wire object shared by the
// CLI, the HTTP service and the UI.

#ifndef LPX_EXPLAIN_HPP_
#define LPX_EXPLAIN_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lpx/attribution.hpp"

namespace lpx {

inline constexpr const char* kExplanationSchema = "lpx.explanation/1";

enum class Side { kLo, kHi };
std::string_view SideName(Side side);  // "LO" | "HI"

struct ExplainedPair {
  int mv = 0;  // snapshot MV index
  int cv = 0;  // snapshot CV index
  std::string mv_id;
  std::string cv_id;
  Side side = Side::kLo;  // CV limit being held
  double penalty = 0.0;
  bool local_best = false;
  bool forbidden = false;
};

// Two-CV competition for one shared locally best MV.
struct DeltaP {
  double factorized = 0.0;  // closed form in c_u, G_A^-1 and signs
  double direct = 0.0;      // (P11 + P22) - (P12 + P21)
  double p_diag = 0.0;
  double p_off = 0.0;
  int shared_row = 0;       // position in mv_u of the shared best MV
};

struct ExplanationDocument {
  std::string schema_version = kExplanationSchema;
  std::string timestamp;
  std::vector<VariableMeta> mvs;
  std::vector<VariableMeta> cvs;
  LPSolution solution;
  KktReport kkt;
  ActiveSet active;
  Vector lambda_analytic;
  ContributionMatrices matrices;
  Matrix penalty;
  PairingAssignment assignment;
  std::vector<ExplainedPair> pairs;  // ascending MV index
  std::optional<DeltaP> delta_p;
  std::vector<std::string> warnings;
};

// Runs the full pipeline. Errors propagate with their stage label.
ExplanationDocument Explain(const ControllerSnapshot& snapshot);

// Delta P for a k = 2 active set whose CVs share the MV with the -1 entry.
// Throws Error(kNotApplicable) otherwise.
DeltaP ComputeDeltaP(const ActiveSet& active, const ContributionMatrices& matrices);

nlohmann::json ExplanationToJson(const ExplanationDocument& doc);
// Human-readable rendering: pairings, lambda, Pi and P.
std::string RenderExplanationTable(const ExplanationDocument& doc);
// Structural check of a serialized document against the published schema.
// Returns one message per problem; empty when the document conforms.
std::vector<std::string> CheckExplanationJson(const nlohmann::json& doc);

// Matrix as row-major nested arrays; infinite entries become null.
nlohmann::json MatrixToJson(const Matrix& m);
nlohmann::json VectorToJson(const Vector& v);

}  // namespace lpx

#endif  // LPX_EXPLAIN_HPP_
