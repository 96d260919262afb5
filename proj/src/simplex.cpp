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

#include "simplex.hpp"

#include <cmath>

namespace lpx::detail {
namespace {

constexpr int kRefactorInterval = 64;
constexpr double kTieTolerance = 1e-12;

}  // namespace

PrimalSimplex::PrimalSimplex(const BoundedLp& lp, std::vector<int> basis,
                             std::vector<VarState> state, Vector value,
                             SimplexTolerances tol)
    : lp_(lp),
      basis_(std::move(basis)),
      state_(std::move(state)),
      value_(std::move(value)),
      tol_(tol) {
  Refactor();
}

void PrimalSimplex::SetBounds(int var, double lower, double upper) {
  lp_.lower[var] = lower;
  lp_.upper[var] = upper;
}

void PrimalSimplex::Refactor() {
  const Index m = lp_.a.rows();
  Matrix b(m, m);
  for (Index r = 0; r < m; ++r) b.col(r) = lp_.a.col(basis_[r]);
  binv_ = b.partialPivLu().inverse();
  since_refactor_ = 0;
  ComputeBasicValues();
}

void PrimalSimplex::ComputeBasicValues() {
  Vector rhs = lp_.rhs;
  for (Index j = 0; j < lp_.a.cols(); ++j) {
    if (state_[j] != VarState::kBasic && value_[j] != 0.0) {
      rhs.noalias() -= lp_.a.col(j) * value_[j];
    }
  }
  const Vector xb = binv_ * rhs;
  for (std::size_t r = 0; r < basis_.size(); ++r) value_[basis_[r]] = xb[r];
}

Vector PrimalSimplex::Duals() const {
  Vector cb(static_cast<Index>(basis_.size()));
  for (std::size_t r = 0; r < basis_.size(); ++r) cb[r] = lp_.cost[basis_[r]];
  return binv_.transpose() * cb;
}

SimplexOutcome PrimalSimplex::Run(int max_iterations, int stall_limit) {
  const Index n_vars = lp_.a.cols();
  const Index m = lp_.a.rows();
  int stalled = 0;
  for (int iter = 0;; ++iter) {
    if (iter >= max_iterations) return SimplexOutcome::kIterationLimit;
    if (since_refactor_ >= kRefactorInterval) Refactor();

    const bool bland = stalled > stall_limit;
    const Vector y = Duals();
    int entering = -1;
    double dir = 0.0;
    double best = 0.0;
    for (Index j = 0; j < n_vars; ++j) {
      const VarState st = state_[j];
      if (st == VarState::kBasic || lp_.lower[j] == lp_.upper[j]) continue;
      const double d = lp_.cost[j] - lp_.a.col(j).dot(y);
      double move = 0.0;
      if (d < -tol_.dual && st != VarState::kAtUpper) move = 1.0;
      if (d > tol_.dual && st != VarState::kAtLower) move = -1.0;
      if (move == 0.0) continue;
      if (bland) {
        entering = static_cast<int>(j);
        dir = move;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        entering = static_cast<int>(j);
        dir = move;
      }
    }
    if (entering < 0) return SimplexOutcome::kOptimal;

    const Vector alpha = binv_ * lp_.a.col(entering);
    // Entering moves by dir * t; basic r moves by -dir * alpha[r] * t.
    double step = dir > 0 ? lp_.upper[entering] - value_[entering]
                          : value_[entering] - lp_.lower[entering];
    int leave_pos = -1;  // -1 means a bound flip of the entering variable
    double leave_mag = 0.0;
    for (Index r = 0; r < m; ++r) {
      const double delta = -dir * alpha[r];
      if (std::abs(delta) <= tol_.pivot) continue;
      const int var = basis_[r];
      double limit;
      if (delta < 0) {
        if (!std::isfinite(lp_.lower[var])) continue;
        limit = (value_[var] - lp_.lower[var]) / -delta;
      } else {
        if (!std::isfinite(lp_.upper[var])) continue;
        limit = (lp_.upper[var] - value_[var]) / delta;
      }
      limit = std::max(limit, 0.0);
      if (limit < step - kTieTolerance) {
        step = limit;
        leave_pos = static_cast<int>(r);
        leave_mag = std::abs(delta);
        continue;
      }
      if (leave_pos < 0 || limit > step + kTieTolerance) continue;
      // Tie: Bland takes the lowest variable index, otherwise the largest
      // pivot and then the lowest index.
      const int incumbent = basis_[leave_pos];
      const double mag = std::abs(delta);
      const bool take =
          bland ? var < incumbent
                : (mag > leave_mag * (1 + 1e-9) ||
                   (mag >= leave_mag * (1 - 1e-9) && var < incumbent));
      if (take) {
        step = std::min(step, limit);
        leave_pos = static_cast<int>(r);
        leave_mag = mag;
      }
    }
    if (!std::isfinite(step)) {
      unbounded_var_ = entering;
      unbounded_column_ = -dir * alpha;
      iterations_ += 1;
      return SimplexOutcome::kUnbounded;
    }

    ++iterations_;
    stalled = step <= kTieTolerance ? stalled + 1 : 0;

    value_[entering] += dir * step;
    for (Index r = 0; r < m; ++r) value_[basis_[r]] -= dir * alpha[r] * step;

    if (leave_pos < 0) {
      // Bound flip; basis unchanged.
      state_[entering] = dir > 0 ? VarState::kAtUpper : VarState::kAtLower;
      value_[entering] = dir > 0 ? lp_.upper[entering] : lp_.lower[entering];
      continue;
    }
    const int leaving = basis_[leave_pos];
    const double delta = -dir * alpha[leave_pos];
    if (delta < 0) {
      state_[leaving] = VarState::kAtLower;
      value_[leaving] = lp_.lower[leaving];
    } else {
      state_[leaving] = VarState::kAtUpper;
      value_[leaving] = lp_.upper[leaving];
    }
    basis_[leave_pos] = entering;
    state_[entering] = VarState::kBasic;

    // Product-form update of the explicit inverse.
    const double piv = alpha[leave_pos];
    binv_.row(leave_pos) /= piv;
    for (Index r = 0; r < m; ++r) {
      if (r == leave_pos || alpha[r] == 0.0) continue;
      binv_.row(r) -= alpha[r] * binv_.row(leave_pos);
    }
    ++since_refactor_;
  }
}

bool PrimalSimplex::PivotOut(int pos, const std::vector<int>& candidates) {
  const Eigen::RowVectorXd rho = binv_.row(pos);
  int best = -1;
  double best_mag = tol_.pivot;
  for (int j : candidates) {
    if (state_[j] == VarState::kBasic) continue;
    const double e = rho.dot(lp_.a.col(j));
    if (std::abs(e) > best_mag * (1 + 1e-12)) {
      best_mag = std::abs(e);
      best = j;
    }
  }
  if (best < 0) return false;
  const int leaving = basis_[pos];
  state_[leaving] = VarState::kAtLower;
  value_[leaving] = lp_.lower[leaving];
  basis_[pos] = best;
  state_[best] = VarState::kBasic;
  Refactor();
  return true;
}

}  // namespace lpx::detail
