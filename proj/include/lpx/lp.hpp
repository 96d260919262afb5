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

// Steady-state target LP of an LP-MPC controller:
//
//   min  c' dMV
//   s.t. dCV_L <= G dMV <= dCV_U     (soft, rank ordered)
//        dMV_L <=   dMV  <= dMV_U    (hard)
//
// Net shadow prices follow the stationarity form c - G' lambda - mu = 0,
// with lambda_j > 0 when CV j holds its lower limit and < 0 at its upper.

#ifndef LPX_LP_HPP_
#define LPX_LP_HPP_

#include <string_view>
#include <vector>

#include "lpx/snapshot.hpp"

namespace lpx {

enum class ConstraintStatus {
  kFreeWithin,
  kAtLower,
  kAtUpper,
  kGivenUpLower,
  kGivenUpUpper,
  kPinned,
};

std::string_view StatusName(ConstraintStatus status);

struct LPSolution {
  Vector delta_mv;
  double objective = 0.0;
  Vector lambda;  // length m
  Vector mu;      // length n
  std::vector<ConstraintStatus> mv_status;
  std::vector<ConstraintStatus> cv_status;
  std::vector<int> infeasible_cvs;  // given up, ascending index
  int iterations = 0;
  // More constraints active than free decision variables, or a nonbasic MV
  // left strictly inside its limits.
  bool degenerate = false;
  // A nonbasic variable with (near) zero reduced cost: alternative optima,
  // the cost vector sits on a normal-cone boundary.
  bool dual_degenerate = false;
  // Final simplex basis. Basic MVs are the unconstrained ones; nonbasic CVs
  // (not given up) are the constrained ones.
  std::vector<bool> mv_basic;
  std::vector<bool> cv_basic;
};

struct SolveOptions {
  // Bland's rule takes over after this many consecutive degenerate pivots.
  int stall_limit = 50;
  // Hard cap on pivots per phase, as a multiple of (rows + columns).
  int iteration_factor = 50;
};

// Solves the target LP for one snapshot. Throws Error(kUnbounded) naming the
// MV along whose direction the cost decreases without limit, or
// Error(kNoInServiceMV).
LPSolution Solve(const ControllerSnapshot& snapshot,
                 const SolveOptions& options = {});

struct KktReport {
  Vector stationarity;             // c - G' lambda - mu
  double stationarity_max = 0.0;   // infinity norm of the above
  double complementarity_max = 0.0;
  double primal_max = 0.0;
  double dual_sign_max = 0.0;      // multipliers with the wrong sign for their side
  double tolerance = 0.0;          // 1e-8 * max(1, ||c||_inf)
  bool passed = false;
};

KktReport KktResiduals(const ControllerSnapshot& snapshot,
                       const LPSolution& solution);

// One candidate vertex of the feasible region in dMV space.
struct VertexCandidate {
  // Active constraints, encoded as 2*i (+1 for upper) over MVs first and
  // then 2*(n + j) (+1 for upper) over CVs.
  std::vector<int> active;
  Vector delta_mv;
  double objective = 0.0;
  bool feasible = false;
};

inline constexpr int kMaxEnumerationMVs = 12;

// Brute-force vertex enumeration over all size-n subsets of the finite
// limits. Out-of-service and pinned MVs are held at their fixed value and do
// not count towards n. Throws Error(kTooManyVariables) when n > 12.
std::vector<VertexCandidate> EnumerateVertices(const ControllerSnapshot& snapshot);

}  // namespace lpx

#endif  // LPX_LP_HPP_
