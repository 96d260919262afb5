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

#include "lpx/attribution.hpp"

#include <cmath>

namespace lpx {

ContributionMatrices Contributions(const ActiveSet& active) {
  const Index k = active.k();
  ContributionMatrices out;
  out.eps_lambda = 1e-9 * std::max(1.0, k > 0 ? active.c_u.lpNorm<Eigen::Infinity>() : 0.0);
  out.w = active.c_u.asDiagonal() * active.g_a_inv;
  out.sign.resize(k);
  for (Index j = 0; j < k; ++j) {
    const double lambda = active.lambda_active[j];
    if (std::abs(lambda) > out.eps_lambda) {
      out.sign[j] = lambda > 0.0 ? -1.0 : 1.0;
    } else {
      out.sign[j] = active.cv_at_upper[j] ? 1.0 : -1.0;
    }
  }
  out.w_corr = out.w * out.sign.asDiagonal();
  out.anomalous.assign(k, false);
  return out;
}

void Normalize(ContributionMatrices& matrices) {
  const Index k = matrices.w_corr.cols();
  matrices.pi.resize(k, k);
  matrices.anomalous.assign(k, false);
  for (Index j = 0; j < k; ++j) {
    const auto col = matrices.w_corr.col(j);
    const double max_abs = col.cwiseAbs().maxCoeff();
    if (!(max_abs > kZeroTolerance)) {
      throw Error(ErrorCode::kZeroColumn, "attribution",
                  "contribution column " + std::to_string(j) + " is zero");
    }
    const double min = col.minCoeff();
    if (min < 0.0) {
      matrices.pi.col(j) = col / -min;
    } else {
      matrices.pi.col(j) = col / max_abs;
      matrices.anomalous[j] = true;
    }
  }
}

Matrix PenaltyMatrix(const ContributionMatrices& matrices) {
  Matrix p = matrices.pi;
  for (Index i = 0; i < p.rows(); ++i) {
    for (Index j = 0; j < p.cols(); ++j) {
      if (std::abs(p(i, j)) <= kZeroTolerance) p(i, j) = kInf;
    }
  }
  return p;
}

}  // namespace lpx
