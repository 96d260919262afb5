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

#include "lpx/lp.hpp"

namespace lpx {
namespace {

// Largest |multiplier| x distance to the bound its sign says is active.
double Complementarity(double multiplier, double value, const Bounds& b) {
  if (multiplier == 0.0 || b.pinned()) return 0.0;
  const double bound = multiplier > 0.0 ? b.lower : b.upper;
  if (!std::isfinite(bound)) return kInf;
  return std::abs(multiplier) * std::abs(value - bound);
}

// Part of the multiplier whose sign has no matching finite bound.
double WrongSign(double multiplier, const Bounds& b) {
  if (b.pinned()) return 0.0;
  double wrong = 0.0;
  if (!b.has_lower()) wrong = std::max(wrong, multiplier);
  if (!b.has_upper()) wrong = std::max(wrong, -multiplier);
  return wrong;
}

double RelativeViolation(double value, const Bounds& b) {
  double v = 0.0;
  if (b.has_lower()) v = std::max(v, (b.lower - value) / std::max(1.0, std::abs(b.lower)));
  if (b.has_upper()) v = std::max(v, (value - b.upper) / std::max(1.0, std::abs(b.upper)));
  return v;
}

}  // namespace

KktReport KktResiduals(const ControllerSnapshot& snapshot,
                       const LPSolution& solution) {
  const Index n = snapshot.n();
  const Index m = snapshot.m();
  KktReport report;
  report.tolerance = 1e-8 * std::max(1.0, snapshot.costs.lpNorm<Eigen::Infinity>());
  report.stationarity = snapshot.costs - snapshot.gains.transpose() * solution.lambda -
                        solution.mu;
  report.stationarity_max = report.stationarity.lpNorm<Eigen::Infinity>();

  std::vector<bool> given_up(m, false);
  for (int j : solution.infeasible_cvs) given_up[j] = true;

  const Vector activity = snapshot.gains * solution.delta_mv;
  for (Index i = 0; i < n; ++i) {
    const Bounds b = snapshot.mv_delta_bounds(i);
    const double x = solution.delta_mv[i];
    report.primal_max = std::max(report.primal_max, RelativeViolation(x, b));
    report.complementarity_max =
        std::max(report.complementarity_max, Complementarity(solution.mu[i], x, b));
    report.dual_sign_max = std::max(report.dual_sign_max, WrongSign(solution.mu[i], b));
  }
  for (Index j = 0; j < m; ++j) {
    const double lambda = solution.lambda[j];
    if (given_up[j]) {
      report.dual_sign_max = std::max(report.dual_sign_max, std::abs(lambda));
      continue;
    }
    const Bounds b = snapshot.cv_delta_bounds(j);
    report.primal_max = std::max(report.primal_max, RelativeViolation(activity[j], b));
    report.complementarity_max =
        std::max(report.complementarity_max, Complementarity(lambda, activity[j], b));
    report.dual_sign_max = std::max(report.dual_sign_max, WrongSign(lambda, b));
  }
  report.passed = report.stationarity_max <= report.tolerance &&
                  report.complementarity_max <= report.tolerance &&
                  report.primal_max <= report.tolerance &&
                  report.dual_sign_max <= report.tolerance;
  return report;
}

}  // namespace lpx
