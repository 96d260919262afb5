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

#include "lpx/active_set.hpp"

#include <cmath>

namespace lpx {
namespace {

constexpr double kPivotTolerance = 1e-12;
constexpr double kDualTolerance = 1e-6;

double OneNorm(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

ActiveSet Partition(const ControllerSnapshot& snapshot, const LPSolution& solution) {
  ActiveSet active;
  std::vector<bool> given_up(snapshot.m(), false);
  for (int j : solution.infeasible_cvs) given_up[j] = true;
  for (Index i = 0; i < snapshot.n(); ++i) {
    const int id = static_cast<int>(i);
    if (!snapshot.mvs[i].in_service) {
      active.mv_oos.push_back(id);
    } else if (solution.mv_basic[i]) {
      active.mv_u.push_back(id);
    } else {
      active.mv_c.push_back(id);
    }
  }
  for (Index j = 0; j < snapshot.m(); ++j) {
    const int id = static_cast<int>(j);
    if (solution.cv_basic[j] || given_up[j]) {
      active.cv_u.push_back(id);
    } else {
      active.cv_c.push_back(id);
      active.cv_at_upper.push_back(solution.cv_status[j] == ConstraintStatus::kAtUpper);
    }
  }
  if (active.mv_u.size() != active.cv_c.size()) {
    throw Error(ErrorCode::kNonSquareActiveSet, "active-set",
                std::to_string(active.mv_u.size()) + " unconstrained MVs vs " +
                    std::to_string(active.cv_c.size()) + " constrained CVs");
  }
  const Index k = active.k();
  active.g_a.resize(k, k);
  active.c_u.resize(k);
  active.lambda_active.resize(k);
  for (Index r = 0; r < k; ++r) {
    for (Index c = 0; c < k; ++c) active.g_a(r, c) = snapshot.gains(active.cv_c[r], active.mv_u[c]);
    active.lambda_active[r] = solution.lambda[active.cv_c[r]];
  }
  for (Index c = 0; c < k; ++c) active.c_u[c] = snapshot.costs[active.mv_u[c]];
  return active;
}

void InvertActive(ActiveSet& active) {
  const Index k = active.k();
  if (k == 0) {
    active.g_a_inv.resize(0, 0);
    active.cond_estimate = 0.0;
    return;
  }
  const double scale = active.g_a.cwiseAbs().maxCoeff();
  const Eigen::PartialPivLU<Matrix> lu(active.g_a);
  const double pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(pivot > kPivotTolerance * scale)) {
    throw Error(ErrorCode::kSingularActiveMatrix, "active-set",
                "G_A pivot " + std::to_string(pivot) + " below tolerance");
  }
  active.g_a_inv = lu.inverse();
  active.cond_estimate = OneNorm(active.g_a) * OneNorm(active.g_a_inv);
  active.ill_conditioned = active.cond_estimate > kIllConditioned;
  const double residual =
      (active.g_a * active.g_a_inv - Matrix::Identity(k, k)).lpNorm<Eigen::Infinity>();
  if (!(residual <= 1e-8 * active.cond_estimate)) {
    throw Error(ErrorCode::kSingularActiveMatrix, "active-set",
                "inverse residual " + std::to_string(residual) + " too large");
  }
}

Vector AnalyticShadowPrices(const ActiveSet& active) {
  if (active.k() == 0) return Vector(0);
  const Vector lambda = active.g_a_inv.transpose() * active.c_u;
  const double scale = std::max(1.0, active.lambda_active.lpNorm<Eigen::Infinity>());
  const double gap = (lambda - active.lambda_active).lpNorm<Eigen::Infinity>();
  if (gap > kDualTolerance * scale) {
    throw Error(ErrorCode::kDualMismatch, "active-set",
                "analytic shadow prices differ from solver duals by " + std::to_string(gap));
  }
  return lambda;
}

}  // namespace lpx
