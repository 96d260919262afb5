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

#include <cmath>
#include <vector>

#include "lpx/attribution.hpp"

namespace lpx {

// Shortest augmenting path with potentials, O(k^3). Rows are inserted in
// ascending order, which fixes the choice among equal-cost matchings.
std::vector<int> Hungarian(const Matrix& cost) {
  const int k = static_cast<int>(cost.rows());
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0), minv(k + 1);
  std::vector<int> p(k + 1, 0), way(k + 1, 0);
  std::vector<bool> used(k + 1);
  for (int i = 1; i <= k; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(k);
  for (int j = 1; j <= k; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

PairingAssignment Assign(const Matrix& penalty) {
  const Index k = penalty.rows();
  PairingAssignment out;
  out.assignment = Eigen::MatrixXi::Zero(k, k);
  if (k == 0) return out;
  double max_finite = 0.0;
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      if (std::isfinite(penalty(i, j))) max_finite = std::max(max_finite, std::abs(penalty(i, j)));
    }
  }
  const double big_m = 1e9 + static_cast<double>(k) * max_finite;
  Matrix cost = penalty;
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      if (!std::isfinite(cost(i, j))) cost(i, j) = big_m;
    }
  }
  const std::vector<int> match = Hungarian(cost);
  const Eigen::RowVectorXd col_min = penalty.colwise().minCoeff();
  for (Index i = 0; i < k; ++i) {
    const int j = match[i];
    Pair pair;
    pair.row = static_cast<int>(i);
    pair.col = j;
    pair.penalty = penalty(i, j);
    pair.forbidden = !std::isfinite(pair.penalty);
    pair.local_best = !pair.forbidden && pair.penalty == col_min[j];
    out.forbidden_used = out.forbidden_used || pair.forbidden;
    out.total_penalty += pair.penalty;
    out.assignment(i, j) = 1;
    out.pairs.push_back(pair);
  }
  return out;
}

}  // namespace lpx
