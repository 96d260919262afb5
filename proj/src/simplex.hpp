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

// Dense bounded-variable revised primal simplex. Internal to lp_solve.cpp.

#ifndef LPX_SRC_SIMPLEX_HPP_
#define LPX_SRC_SIMPLEX_HPP_

#include <vector>

#include "lpx/common.hpp"

namespace lpx::detail {

// min cost'y  s.t.  a y = rhs,  lower <= y <= upper.
struct BoundedLp {
  Matrix a;
  Vector rhs;
  Vector lower;
  Vector upper;
  Vector cost;
};

enum class VarState {
  kBasic,
  kAtLower,
  kAtUpper,
  kSuperbasic,  // nonbasic strictly inside its bounds (or free)
};

struct SimplexTolerances {
  double primal = 1e-9;
  double dual = 1e-9;
  double pivot = 1e-9;
};

enum class SimplexOutcome { kOptimal, kUnbounded, kIterationLimit };

class PrimalSimplex {
 public:
  // `basis[r]` is the variable basic in row position r. The starting point
  // must be primal feasible; nonbasic values are taken from `value`.
  PrimalSimplex(const BoundedLp& lp, std::vector<int> basis,
                std::vector<VarState> state, Vector value,
                SimplexTolerances tol = {});

  SimplexOutcome Run(int max_iterations, int stall_limit);

  // Degenerate pivot that removes the variable basic at position `pos`,
  // bringing in the nonbasic column in `candidates` with the largest pivot
  // element. Returns false when every candidate has a zero pivot element.
  bool PivotOut(int pos, const std::vector<int>& candidates);

  void SetCost(const Vector& cost) { lp_.cost = cost; }
  void SetBounds(int var, double lower, double upper);
  // Recomputes the inverse and basic values from scratch.
  void Refactor();

  const std::vector<int>& basis() const { return basis_; }
  const std::vector<VarState>& state() const { return state_; }
  const Vector& value() const { return value_; }
  int iterations() const { return iterations_; }
  double Objective() const { return lp_.cost.dot(value_); }

  // Valid after kUnbounded: the entering variable and its basic direction.
  int unbounded_var() const { return unbounded_var_; }
  const Vector& unbounded_column() const { return unbounded_column_; }

 private:
  void ComputeBasicValues();
  Vector Duals() const;

  BoundedLp lp_;
  std::vector<int> basis_;
  std::vector<VarState> state_;
  Vector value_;
  SimplexTolerances tol_;
  Matrix binv_;
  int iterations_ = 0;
  int since_refactor_ = 0;
  int unbounded_var_ = -1;
  Vector unbounded_column_;
};

}  // namespace lpx::detail

#endif  // LPX_SRC_SIMPLEX_HPP_
