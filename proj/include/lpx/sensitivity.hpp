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

// Cost-angle sweeps over one MV pair: the critical regions (normal cones)
// of the LP vertices and the points where the vertex or the pairing flips.

#ifndef LPX_SENSITIVITY_HPP_
#define LPX_SENSITIVITY_HPP_

#include <string>
#include <vector>

#include "lpx/explain.hpp"

namespace lpx {

inline constexpr int kMinSweepSteps = 8;

struct SweepSample {
  double theta = 0.0;  // radians in [0, 2 pi); costs (cos, sin)
  int vertex = -1;     // first-seen order of distinct dMV; -1 when failed
  Vector delta_mv;
  std::string active_signature;   // "MV1,MV2|CV1-HI,CV2-LO"
  std::string pairing_signature;  // "MV1>CV1-HI;MV2>CV2-LO"
  bool degenerate = false;        // cost on a cone boundary
  bool failed = false;
  bool refined = false;           // added by boundary bisection
  std::string error;
};

// Contiguous run of samples sharing one optimal vertex. `end` may exceed
// 2 pi when the region wraps through theta = 0.
struct SweepRegion {
  double begin = 0.0;
  double end = 0.0;
  int vertex = -1;
  Vector delta_mv;
  int samples = 0;  // non-degenerate samples inside
};

enum class FlipKind { kVertex, kPairing, kBoth };
std::string_view FlipKindName(FlipKind kind);

struct FlipPoint {
  double theta = 0.0;  // bracket midpoint
  double width = 0.0;  // bracket width after bisection
  FlipKind kind = FlipKind::kVertex;
  std::string before;  // pairing signature left of the flip
  std::string after;
};

struct SweepResult {
  std::string mv_i;
  std::string mv_j;
  int steps = 0;
  std::vector<SweepSample> samples;  // ordered by theta, refined included
  std::vector<SweepRegion> regions;
  std::vector<FlipPoint> flips;
};

struct SweepOptions {
  double refine_width = 1e-6;
};

// Sweeps (c_i, c_j) = (cos theta, sin theta) over [0, 2 pi) in `steps`
// samples, holding the other costs. Per-sample pipeline failures are
// recorded and the sweep continues. Throws Error(kInvalidArgument) when
// steps < 8 or either MV is out of service.
SweepResult SweepCostRatio(const ControllerSnapshot& snapshot, int mv_i, int mv_j,
                           int steps, const SweepOptions& options = {});

nlohmann::json SweepToJson(const SweepResult& result);
// One row per sample: theta, vertex id, pairing signature.
std::string SweepToCsv(const SweepResult& result);

}  // namespace lpx

#endif  // LPX_SENSITIVITY_HPP_
