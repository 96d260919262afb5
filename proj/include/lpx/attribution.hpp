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

// Shadow price attribution: how much each unconstrained MV contributes to
// holding each constrained CV, and the one-to-one pairing that minimizes the
// total normalized contribution penalty.

#ifndef LPX_ATTRIBUTION_HPP_
#define LPX_ATTRIBUTION_HPP_

#include <vector>

#include "lpx/active_set.hpp"

namespace lpx {

inline constexpr double kZeroTolerance = 1e-12;

// Rows follow ActiveSet::mv_u, columns follow ActiveSet::cv_c.
struct ContributionMatrices {
  Matrix w;       // diag(c_u) G_A^-1; column sums are lambda
  Matrix w_corr;  // columns multiplied by sign
  Matrix pi;      // w_corr columns over |column minimum|
  Vector sign;    // -sgn(lambda_j), or the active side when lambda_j ~ 0
  std::vector<bool> anomalous;  // column had no negative entry
  double eps_lambda = 0.0;      // 1e-9 x max(1, |c_u|_inf)
};

ContributionMatrices Contributions(const ActiveSet& active);

// Fills pi. Throws Error(kZeroColumn) for an all-zero column.
void Normalize(ContributionMatrices& matrices);

// Pi with |entries| <= 1e-12 replaced by +infinity.
Matrix PenaltyMatrix(const ContributionMatrices& matrices);

struct Pair {
  int row = 0;  // position in mv_u
  int col = 0;  // position in cv_c
  double penalty = 0.0;
  bool local_best = false;  // penalty equals the column minimum
  bool forbidden = false;   // infinite cell
};

struct PairingAssignment {
  std::vector<Pair> pairs;  // one per row, ascending row
  double total_penalty = 0.0;
  Eigen::MatrixXi assignment;  // X
  bool forbidden_used = false;
};

// Minimum-cost perfect matching of a finite square cost matrix; returns the
// column assigned to each row.
std::vector<int> Hungarian(const Matrix& cost);

// Minimum total penalty one-to-one assignment. Infinite cells become
// big-M = 1e9 + k x max finite |entry| and are flagged when used.
PairingAssignment Assign(const Matrix& penalty);

}  // namespace lpx

#endif  // LPX_ATTRIBUTION_HPP_
