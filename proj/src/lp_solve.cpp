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
#include <map>
#include <optional>

#include "lpx/lp.hpp"
#include "simplex.hpp"

namespace lpx {

std::string_view StatusName(ConstraintStatus status) {
  switch (status) {
    case ConstraintStatus::kFreeWithin: return "FreeWithin";
    case ConstraintStatus::kAtLower: return "AtLower";
    case ConstraintStatus::kAtUpper: return "AtUpper";
    case ConstraintStatus::kGivenUpLower: return "GivenUpLower";
    case ConstraintStatus::kGivenUpUpper: return "GivenUpUpper";
    case ConstraintStatus::kPinned: return "Pinned";
  }
  return "Unknown";
}

namespace {

using detail::BoundedLp;
using detail::PrimalSimplex;
using detail::SimplexOutcome;
using detail::VarState;

// Total scaled violation below which the CV limits count as satisfied.
constexpr double kFeasibilityTolerance = 1e-8;
constexpr double kDualDegenerateTolerance = 1e-7;

double PowerOfTwoScale(double max_abs) {
  if (max_abs == 0.0 || !std::isfinite(max_abs)) return 1.0;
  return std::ldexp(1.0, -static_cast<int>(std::lround(std::log2(max_abs))));
}

enum class GiveUpSide { kLower, kUpper };

// The target LP in equality form over [dMV | CV activity | elastic-, elastic+]
// with row/column max-abs equilibration (power-of-two factors, so scaling
// itself is exact).
class TargetLp {
 public:
  TargetLp(const ControllerSnapshot& s, const SolveOptions& options)
      : s_(s), options_(options), n_(s.n()), m_(s.m()) {
    row_scale_.resize(m_);
    col_scale_.resize(n_);
    for (Index j = 0; j < m_; ++j) {
      row_scale_[j] = PowerOfTwoScale(s.gains.row(j).cwiseAbs().maxCoeff());
    }
    scaled_gains_ = row_scale_.asDiagonal() * s.gains;
    for (Index i = 0; i < n_; ++i) {
      col_scale_[i] = PowerOfTwoScale(scaled_gains_.col(i).cwiseAbs().maxCoeff());
    }
    scaled_gains_ = scaled_gains_ * col_scale_.asDiagonal();
    Vector c = col_scale_.cwiseProduct(s.costs);
    double cmax = 0.0;
    for (Index i = 0; i < n_; ++i) {
      if (s.mvs[i].in_service) cmax = std::max(cmax, std::abs(c[i]));
    }
    cost_scale_ = cmax > 0.0 ? cmax : 1.0;
    phase2_cost_ = Vector::Zero(num_vars());
    phase2_cost_.head(n_) = c / cost_scale_;

    base_.a = Matrix::Zero(m_, num_vars());
    base_.a.leftCols(n_) = scaled_gains_;
    for (Index j = 0; j < m_; ++j) {
      base_.a(j, S(j)) = -1.0;
      base_.a(j, Em(j)) = 1.0;
      base_.a(j, Ep(j)) = -1.0;
    }
    base_.rhs = Vector::Zero(m_);
    base_.lower.resize(num_vars());
    base_.upper.resize(num_vars());
    for (Index i = 0; i < n_; ++i) {
      const Bounds b = s.mv_delta_bounds(i);
      base_.lower[i] = b.lower / col_scale_[i];
      base_.upper[i] = b.upper / col_scale_[i];
    }
    for (Index j = 0; j < m_; ++j) {
      const Bounds b = s.cv_delta_bounds(j);
      base_.lower[S(j)] = b.lower * row_scale_[j];
      base_.upper[S(j)] = b.upper * row_scale_[j];
      base_.lower[Em(j)] = base_.lower[Ep(j)] = 0.0;
      base_.upper[Em(j)] = base_.upper[Ep(j)] = kInf;
    }
    max_iterations_ =
        options_.iteration_factor * static_cast<int>(m_ + num_vars());
  }

  Index num_vars() const { return n_ + 3 * m_; }
  Index S(Index j) const { return n_ + j; }
  Index Em(Index j) const { return n_ + m_ + j; }
  Index Ep(Index j) const { return n_ + 2 * m_ + j; }

  struct Phase1 {
    PrimalSimplex simplex;
    double violation;
  };

  // Minimizes total scaled violation of the CV limits not in `dropped`.
  Phase1 RunPhase1(const std::vector<bool>& dropped, int& iterations) const {
    BoundedLp lp = base_;
    lp.cost = Vector::Zero(num_vars());
    for (Index j = 0; j < m_; ++j) {
      if (dropped[j]) {
        lp.lower[S(j)] = -kInf;
        lp.upper[S(j)] = kInf;
      } else {
        lp.cost[Em(j)] = lp.cost[Ep(j)] = 1.0;
      }
    }
    std::vector<VarState> state(num_vars(), VarState::kAtLower);
    Vector value = Vector::Zero(num_vars());
    for (Index i = 0; i < n_; ++i) {
      const double lo = lp.lower[i], hi = lp.upper[i];
      if (lo > 0.0) {
        value[i] = lo;
      } else if (hi < 0.0) {
        value[i] = hi;
        state[i] = VarState::kAtUpper;
      } else if (lo == hi) {
        value[i] = lo;
      } else if (lo == 0.0) {
        state[i] = VarState::kAtLower;
      } else if (hi == 0.0) {
        state[i] = VarState::kAtUpper;
      } else {
        state[i] = VarState::kSuperbasic;
      }
    }
    const Vector activity = scaled_gains_ * value.head(n_);
    std::vector<int> basis(m_);
    for (Index j = 0; j < m_; ++j) {
      const double r = activity[j];
      if (r < lp.lower[S(j)]) {
        value[S(j)] = lp.lower[S(j)];
        state[S(j)] = VarState::kAtLower;
        basis[j] = static_cast<int>(Em(j));
      } else if (r > lp.upper[S(j)]) {
        value[S(j)] = lp.upper[S(j)];
        state[S(j)] = VarState::kAtUpper;
        basis[j] = static_cast<int>(Ep(j));
      } else {
        basis[j] = static_cast<int>(S(j));
      }
      state[basis[j]] = VarState::kBasic;
    }
    PrimalSimplex sx(lp, std::move(basis), std::move(state), std::move(value));
    const auto outcome = sx.Run(max_iterations_, options_.stall_limit);
    iterations += sx.iterations();
    if (outcome == SimplexOutcome::kIterationLimit) {
      throw Error(ErrorCode::kIterationLimit, "lp-engine",
                  "feasibility phase did not converge");
    }
    if (outcome == SimplexOutcome::kUnbounded) {
      throw Error(ErrorCode::kIterationLimit, "lp-engine",
                  "feasibility phase reported an unbounded ray");
    }
    double v = 0.0;
    for (Index j = 0; j < m_; ++j) {
      if (!dropped[j]) v += sx.value()[Em(j)] + sx.value()[Ep(j)];
    }
    return {std::move(sx), v};
  }

  LPSolution Solve() const {
    int in_service = 0;
    for (const auto& mv : s_.mvs) in_service += mv.in_service ? 1 : 0;
    if (in_service == 0) {
      throw Error(ErrorCode::kNoInServiceMV, "lp-engine",
                  "every MV is out of service");
    }
    int iterations = 0;
    std::vector<bool> dropped(m_, false);
    std::vector<std::optional<GiveUpSide>> given_up_side(m_);
    Phase1 p1 = RunPhase1(dropped, iterations);
    if (p1.violation > kFeasibilityTolerance) {
      GiveUp(dropped, given_up_side, p1, iterations);
    }
    PrimalSimplex& sx = p1.simplex;

    // Elastic columns are frozen at zero; move any still basic out.
    for (Index j = 0; j < m_; ++j) {
      sx.SetBounds(static_cast<int>(Em(j)), 0.0, 0.0);
      sx.SetBounds(static_cast<int>(Ep(j)), 0.0, 0.0);
    }
    // Fixed MVs are a last resort: a basic pinned MV would hold a CV.
    std::vector<int> movable, regular;
    for (Index k = 0; k < n_ + m_; ++k) {
      regular.push_back(static_cast<int>(k));
      if (k >= n_ || !s_.mv_delta_bounds(k).pinned()) movable.push_back(static_cast<int>(k));
    }
    for (Index pos = 0; pos < m_; ++pos) {
      if (sx.basis()[pos] < n_ + m_) continue;
      if (!sx.PivotOut(static_cast<int>(pos), movable) &&
          !sx.PivotOut(static_cast<int>(pos), regular)) {
        throw Error(ErrorCode::kIterationLimit, "lp-engine",
                    "could not remove an elastic column from the basis");
      }
    }
    sx.SetCost(phase2_cost_);
    sx.Refactor();
    const int before = sx.iterations();
    const auto outcome = sx.Run(max_iterations_, options_.stall_limit);
    iterations += sx.iterations() - before;
    if (outcome == SimplexOutcome::kIterationLimit) {
      throw Error(ErrorCode::kIterationLimit, "lp-engine",
                  "optimality phase exceeded the pivot limit");
    }
    if (outcome == SimplexOutcome::kUnbounded) ReportUnbounded(sx);
    return Finish(sx, dropped, given_up_side, iterations);
  }

 private:
  // Relaxes CVs, least important rank first, until the limits are
  // consistent. Within a rank the CV whose removal reduces the violation the
  // most goes first; ties go to the higher CV index.
  void GiveUp(std::vector<bool>& dropped,
              std::vector<std::optional<GiveUpSide>>& side, Phase1& p1,
              int& iterations) const {
    std::map<int, std::vector<Index>, std::greater<>> groups;
    for (Index j = 0; j < m_; ++j) groups[s_.cv_rank[j]].push_back(j);

    auto record_side = [&](Index j, const PrimalSimplex& sx) {
      const double lo = sx.value()[Em(j)], hi = sx.value()[Ep(j)];
      if (lo > hi) {
        side[j] = GiveUpSide::kLower;
      } else if (hi > lo) {
        side[j] = GiveUpSide::kUpper;
      } else {
        const Bounds b = s_.cv_delta_bounds(j);
        side[j] = (b.lower + b.upper) / 2 > 0.0 ? GiveUpSide::kLower : GiveUpSide::kUpper;
      }
    };

    for (const auto& [rank, members] : groups) {
      while (p1.violation > kFeasibilityTolerance) {
        Index best = -1;
        double best_v = kInf;
        for (Index j : members) {
          if (dropped[j]) continue;
          dropped[j] = true;
          const double v = RunPhase1(dropped, iterations).violation;
          dropped[j] = false;
          if (v <= best_v + 1e-12) {  // ascending j: ties go to the higher index
            best = j;
            best_v = std::min(best_v, v);
          }
        }
        if (best < 0) break;
        if (best_v >= p1.violation - kFeasibilityTolerance) {
          // No single CV of this rank helps on its own. Fall back to the most
          // violated one in the current elastic solution, if any.
          best = -1;
          double worst = kFeasibilityTolerance;
          for (Index j : members) {
            if (dropped[j]) continue;
            const double e = p1.simplex.value()[Em(j)] + p1.simplex.value()[Ep(j)];
            if (e >= worst) {
              worst = e;
              best = j;
            }
          }
          if (best < 0) break;
        }
        record_side(best, p1.simplex);
        dropped[best] = true;
        p1 = RunPhase1(dropped, iterations);
      }
      if (p1.violation <= kFeasibilityTolerance) break;
    }
  }

  [[noreturn]] void ReportUnbounded(const PrimalSimplex& sx) const {
    Index mv = -1;
    if (sx.unbounded_var() < n_) {
      mv = sx.unbounded_var();
    } else {
      double best = 0.0;
      const Vector& col = sx.unbounded_column();
      for (Index r = 0; r < m_; ++r) {
        const int var = sx.basis()[r];
        if (var < n_ && std::abs(col[r]) > best) {
          best = std::abs(col[r]);
          mv = var;
        }
      }
    }
    std::string who = mv >= 0 ? "MV index " + std::to_string(mv) + " ('" +
                                    s_.mvs[mv].id + "')"
                              : "an unidentified direction";
    throw Error(ErrorCode::kUnbounded, "lp-engine",
                "cost decreases without limit along " + who);
  }

  LPSolution Finish(const PrimalSimplex& sx, const std::vector<bool>& dropped,
                    const std::vector<std::optional<GiveUpSide>>& given_up_side,
                    int iterations) const {
    const auto& basis = sx.basis();
    const auto& state = sx.state();

    // Re-derive the vertex and duals from the final basis in engineering
    // units so that nothing downstream depends on the scaled iterates.
    Matrix b(m_, m_);
    Vector cb(m_);
    for (Index r = 0; r < m_; ++r) {
      const int var = basis[r];
      if (var < n_) {
        b.col(r) = s_.gains.col(var);
        cb[r] = s_.costs[var];
      } else {
        b.col(r) = -Matrix::Identity(m_, m_).col(var - n_);
        cb[r] = 0.0;
      }
    }
    Vector x = Vector::Zero(n_);
    Vector rhs = Vector::Zero(m_);
    for (Index i = 0; i < n_; ++i) {
      if (state[i] == VarState::kBasic) continue;
      const Bounds d = s_.mv_delta_bounds(i);
      switch (state[i]) {
        case VarState::kAtLower: x[i] = d.lower; break;
        case VarState::kAtUpper: x[i] = d.upper; break;
        default: x[i] = sx.value()[i] * col_scale_[i]; break;
      }
      rhs -= s_.gains.col(i) * x[i];
    }
    for (Index j = 0; j < m_; ++j) {
      const VarState st = state[S(j)];
      if (st == VarState::kBasic) continue;
      const Bounds d = s_.cv_delta_bounds(j);
      rhs[j] += st == VarState::kAtUpper ? d.upper : d.lower;
    }
    const Eigen::PartialPivLU<Matrix> lu(b);
    const Vector xb = lu.solve(rhs);
    const Vector y = lu.transpose().solve(cb);
    for (Index r = 0; r < m_; ++r) {
      if (basis[r] < n_) x[basis[r]] = xb[r];
    }

    LPSolution sol;
    sol.delta_mv = x;
    sol.objective = s_.costs.dot(x);
    sol.lambda = y;
    sol.mu = s_.costs - s_.gains.transpose() * y;
    sol.iterations = iterations;
    sol.mv_basic.assign(n_, false);
    sol.cv_basic.assign(m_, false);
    for (Index i = 0; i < n_; ++i) {
      if (state[i] == VarState::kBasic) {
        sol.mv_basic[i] = true;
        sol.mu[i] = 0.0;
      }
    }
    for (Index j = 0; j < m_; ++j) {
      if (state[S(j)] == VarState::kBasic) {
        sol.cv_basic[j] = true;
        sol.lambda[j] = 0.0;
      }
    }

    double cnorm = 0.0;
    for (Index i = 0; i < n_; ++i) {
      if (s_.mvs[i].in_service) cnorm = std::max(cnorm, std::abs(s_.costs[i]));
    }
    const double dual_tol = kDualDegenerateTolerance * cnorm;
    const double ptol = 1e-9;

    sol.mv_status.resize(n_);
    for (Index i = 0; i < n_; ++i) {
      const Bounds d = s_.mv_delta_bounds(i);
      ConstraintStatus st;
      if (d.pinned()) {
        st = ConstraintStatus::kPinned;
      } else if (state[i] == VarState::kBasic) {
        st = ConstraintStatus::kFreeWithin;
        const double v = sx.value()[i];
        if ((std::isfinite(d.lower) && v - d.lower / col_scale_[i] <= ptol) ||
            (std::isfinite(d.upper) && d.upper / col_scale_[i] - v <= ptol)) {
          sol.degenerate = true;
        }
      } else if (state[i] == VarState::kSuperbasic) {
        st = ConstraintStatus::kFreeWithin;
        sol.degenerate = true;
        sol.dual_degenerate = true;
      } else {
        st = state[i] == VarState::kAtLower ? ConstraintStatus::kAtLower
                                            : ConstraintStatus::kAtUpper;
        if (std::abs(sol.mu[i]) <= dual_tol) sol.dual_degenerate = true;
      }
      sol.mv_status[i] = st;
    }

    sol.cv_status.resize(m_);
    for (Index j = 0; j < m_; ++j) {
      const Bounds d = s_.cv_delta_bounds(j);
      ConstraintStatus st;
      if (dropped[j]) {
        sol.infeasible_cvs.push_back(static_cast<int>(j));
        const double r = s_.gains.row(j).dot(x);
        GiveUpSide side = given_up_side[j].value_or(GiveUpSide::kUpper);
        if (r < d.lower) side = GiveUpSide::kLower;
        if (r > d.upper) side = GiveUpSide::kUpper;
        st = side == GiveUpSide::kLower ? ConstraintStatus::kGivenUpLower
                                  : ConstraintStatus::kGivenUpUpper;
      } else if (state[S(j)] == VarState::kBasic) {
        st = ConstraintStatus::kFreeWithin;
        const double v = sx.value()[S(j)];
        const double lo = d.lower * row_scale_[j], hi = d.upper * row_scale_[j];
        if ((std::isfinite(lo) && v - lo <= ptol) ||
            (std::isfinite(hi) && hi - v <= ptol)) {
          sol.degenerate = true;
        }
      } else {
        if (d.pinned()) {
          st = sol.lambda[j] >= 0.0 ? ConstraintStatus::kAtLower
                                    : ConstraintStatus::kAtUpper;
        } else {
          st = state[S(j)] == VarState::kAtLower ? ConstraintStatus::kAtLower
                                                 : ConstraintStatus::kAtUpper;
          const double reach = s_.gains.row(j).cwiseAbs().maxCoeff();
          if (std::abs(sol.lambda[j]) * reach <= dual_tol) {
            sol.dual_degenerate = true;
          }
        }
      }
      sol.cv_status[j] = st;
    }
    return sol;
  }

  const ControllerSnapshot& s_;
  SolveOptions options_;
  Index n_;
  Index m_;
  Vector row_scale_;
  Vector col_scale_;
  double cost_scale_ = 1.0;
  Matrix scaled_gains_;
  Vector phase2_cost_;
  BoundedLp base_;
  int max_iterations_ = 0;
};

}  // namespace

LPSolution Solve(const ControllerSnapshot& snapshot, const SolveOptions& options) {
  return TargetLp(snapshot, options).Solve();
}

}  // namespace lpx
