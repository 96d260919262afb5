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

#include "lpx/lp.hpp"

namespace lpx {
namespace {

constexpr double kRelativeTolerance = 1e-9;

// One finite limit written as  row . x_free = rhs.
struct Limit {
  int code;
  Eigen::RowVectorXd row;
  double rhs;
  bool upper;
};

bool Within(double value, double bound, bool upper) {
  const double slack = kRelativeTolerance * std::max(1.0, std::abs(bound));
  return upper ? value <= bound + slack : value >= bound - slack;
}

}  // namespace

std::vector<VertexCandidate> EnumerateVertices(const ControllerSnapshot& snapshot) {
  const Index n = snapshot.n();
  const Index m = snapshot.m();
  std::vector<Index> free;
  Vector fixed = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const Bounds b = snapshot.mv_delta_bounds(i);
    if (b.pinned()) {
      fixed[i] = b.lower;
    } else {
      free.push_back(i);
    }
  }
  const Index k = static_cast<Index>(free.size());
  if (k > kMaxEnumerationMVs) {
    throw Error(ErrorCode::kTooManyVariables, "lp-engine",
                "vertex enumeration supports at most " +
                    std::to_string(kMaxEnumerationMVs) + " free MVs, got " +
                    std::to_string(k));
  }
  Matrix g_free(m, k);
  for (Index f = 0; f < k; ++f) g_free.col(f) = snapshot.gains.col(free[f]);
  const Vector offset = snapshot.gains * fixed;

  std::vector<Limit> limits;
  for (Index f = 0; f < k; ++f) {
    const Bounds b = snapshot.mv_delta_bounds(free[f]);
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(k);
    e[f] = 1.0;
    const int base = 2 * static_cast<int>(free[f]);
    if (b.has_lower()) limits.push_back({base, e, b.lower, false});
    if (b.has_upper()) limits.push_back({base + 1, e, b.upper, true});
  }
  for (Index j = 0; j < m; ++j) {
    const Bounds b = snapshot.cv_delta_bounds(j);
    const int base = 2 * static_cast<int>(n + j);
    if (b.has_lower()) limits.push_back({base, g_free.row(j), b.lower - offset[j], false});
    if (b.has_upper()) limits.push_back({base + 1, g_free.row(j), b.upper - offset[j], true});
  }

  auto feasible = [&](const Vector& x) {
    for (Index f = 0; f < k; ++f) {
      const Bounds b = snapshot.mv_delta_bounds(free[f]);
      if (b.has_lower() && !Within(x[free[f]], b.lower, false)) return false;
      if (b.has_upper() && !Within(x[free[f]], b.upper, true)) return false;
    }
    const Vector r = snapshot.gains * x;
    for (Index j = 0; j < m; ++j) {
      const Bounds b = snapshot.cv_delta_bounds(j);
      if (b.has_lower() && !Within(r[j], b.lower, false)) return false;
      if (b.has_upper() && !Within(r[j], b.upper, true)) return false;
    }
    return true;
  };

  std::vector<VertexCandidate> out;
  const int total = static_cast<int>(limits.size());
  if (total < k) return out;
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (Index f = 0; f < k; ++f) pick[f] = static_cast<int>(f);
  while (true) {
    Matrix a(k, k);
    Vector rhs(k);
    for (Index r = 0; r < k; ++r) {
      a.row(r) = limits[pick[r]].row;
      rhs[r] = limits[pick[r]].rhs;
    }
    Eigen::FullPivLU<Matrix> lu(a);
    if (k == 0 || lu.isInvertible()) {
      VertexCandidate v;
      v.delta_mv = fixed;
      if (k > 0) {
        const Vector xf = lu.solve(rhs);
        for (Index f = 0; f < k; ++f) v.delta_mv[free[f]] = xf[f];
      }
      for (int p : pick) v.active.push_back(limits[p].code);
      v.objective = snapshot.costs.dot(v.delta_mv);
      v.feasible = feasible(v.delta_mv);
      out.push_back(std::move(v));
    }
    // Next k-combination in lexicographic order.
    Index pos = k - 1;
    while (pos >= 0 && pick[pos] == total - k + pos) --pos;
    if (pos < 0) break;
    ++pick[pos];
    for (Index r = pos + 1; r < k; ++r) pick[r] = pick[r - 1] + 1;
  }
  return out;
}

}  // namespace lpx
