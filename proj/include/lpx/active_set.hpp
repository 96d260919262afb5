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

// Square active set of an LP solution: the unconstrained MVs and the CVs
// they hold at a limit, the gain block G_A between them and its inverse.

#ifndef LPX_ACTIVE_SET_HPP_
#define LPX_ACTIVE_SET_HPP_

#include <vector>

#include "lpx/lp.hpp"

namespace lpx {

inline constexpr double kIllConditioned = 1e8;

struct ActiveSet {
  std::vector<int> mv_u;    // basic MVs, ascending; columns of g_a
  std::vector<int> mv_c;    // in-service MVs at a limit, pinned or nonbasic
  std::vector<int> mv_oos;  // out of service, outside the decision space
  std::vector<int> cv_c;    // CVs held at a limit, ascending; rows of g_a
  std::vector<int> cv_u;    // free or given-up CVs
  std::vector<bool> cv_at_upper;  // per cv_c entry
  Matrix g_a;
  Matrix g_a_inv;  // MVs as rows, CVs as columns
  Vector c_u;
  Vector lambda_active;  // solver duals restricted to cv_c
  double cond_estimate = 0.0;
  bool ill_conditioned = false;

  Index k() const { return static_cast<Index>(mv_u.size()); }
};

// Splits the variables by the solver's final basis. Throws
// Error(kNonSquareActiveSet) when the counts differ.
ActiveSet Partition(const ControllerSnapshot& snapshot, const LPSolution& solution);

// Fills g_a_inv and cond_estimate (exact 1-norm condition number). Throws
// Error(kSingularActiveMatrix) on a pivot below 1e-12 x max|g_a|.
void InvertActive(ActiveSet& active);

// lambda' = c_u' G_A^-1, ordered as cv_c. Throws Error(kDualMismatch) when
// it disagrees with lambda_active beyond 1e-6 x max(1, |lambda|_inf).
Vector AnalyticShadowPrices(const ActiveSet& active);

}  // namespace lpx

#endif  // LPX_ACTIVE_SET_HPP_
