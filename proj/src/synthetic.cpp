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

#include "lpx/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace lpx {

std::string FormatTimestamp(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  // Civil date from day count.
  days += 719468;
  const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(days - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02d:%02d:%02dZ", static_cast<long long>(y), m, d,
                static_cast<int>(rem / 3600), static_cast<int>(rem % 3600 / 60),
                static_cast<int>(rem % 60));
  return buf;
}

SyntheticPlant::SyntheticPlant(const SyntheticOptions& options)
    : options_(options), rng_(options.seed) {
  const int n = options.n, m = options.m;
  ControllerSnapshot& s = model_;
  for (int i = 0; i < n; ++i) s.mvs.push_back({"MV" + std::to_string(i + 1), VariableKind::kMV, i, true, {}});
  for (int j = 0; j < m; ++j) s.cvs.push_back({"CV" + std::to_string(j + 1), VariableKind::kCV, j, true, {}});
  // Sparse gains: each CV responds to two to four MVs, every MV moves
  // at least two CVs.
  s.gains = Matrix::Zero(m, n);
  for (int j = 0; j < m; ++j) {
    const int links = 2 + static_cast<int>(Uniform() * 3);
    for (int l = 0; l < links; ++l) {
      const int i = static_cast<int>(Uniform() * n);
      s.gains(j, i) = (Uniform() < 0.5 ? -1.0 : 1.0) * (0.1 + 2.0 * Uniform());
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < 2; ++r) {
      const int j = (2 * i + r) % m;
      if (s.gains(j, i) == 0.0) s.gains(j, i) = (Uniform() < 0.5 ? -1.0 : 1.0) * (0.1 + Uniform());
    }
  }
  s.costs.resize(n);
  s.mv_current.resize(n);
  for (int i = 0; i < n; ++i) {
    s.costs[i] = 2.0 * Uniform() - 1.0;
    s.mv_current[i] = 100.0 * Uniform();
    s.mv_bounds.push_back({s.mv_current[i] - 5.0 - 10.0 * Uniform(), s.mv_current[i] + 5.0 + 10.0 * Uniform()});
  }
  s.cv_ss.resize(m);
  for (int j = 0; j < m; ++j) {
    s.cv_ss[j] = 50.0 * Uniform();
    const double lo = 1.0 + 6.0 * Uniform(), hi = 1.0 + 6.0 * Uniform();
    Bounds b{s.cv_ss[j] - lo, s.cv_ss[j] + hi};
    const double open = Uniform();
    if (open < 0.15) b.lower = -kInf;
    else if (open < 0.3) b.upper = kInf;
    s.cv_bounds.push_back(b);
    s.cv_rank.push_back(1 + static_cast<int>(Uniform() * 3));
  }
  disturbance_ = Vector::Zero(m);
}

double SyntheticPlant::Uniform() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

ControllerSnapshot SyntheticPlant::Next() {
  const int n = options_.n, m = options_.m;
  ControllerSnapshot s = model_;
  s.timestamp = FormatTimestamp(options_.start_epoch + step_ * options_.interval_seconds);
  ++step_;
  // Slow bounded disturbance walk on the predicted steady state.
  for (int j = 0; j < m; ++j) {
    disturbance_[j] = 0.98 * disturbance_[j] + 0.4 * (Uniform() - 0.5);
    s.cv_ss[j] += disturbance_[j];
  }
  // Cost drift shifts the optimal vertex over the day.
  const double phase = 2.0 * 3.141592653589793 * static_cast<double>(step_ % 1440) / 1440.0;
  for (int i = 0; i < n; ++i) s.costs[i] += 0.05 * std::sin(phase + i);
  for (int i = 0; i < n; ++i) {
    const double u = Uniform();
    if (u < options_.oos_rate) {
      s.mvs[i].in_service = false;
    } else if (u < options_.oos_rate + options_.clamp_rate) {
      // Operator clamp: one limit pulled onto the current value.
      if (Uniform() < 0.5) s.mv_bounds[i].lower = s.mv_current[i];
      else s.mv_bounds[i].upper = s.mv_current[i];
    }
  }
  if (Uniform() < options_.infeasible_rate) {
    // A limit band no MV move can reach.
    const int j = static_cast<int>(Uniform() * m);
    const double reach = s.gains.row(j).cwiseAbs().sum() * 40.0;
    s.cv_bounds[j] = {s.cv_ss[j] + reach + 10.0, s.cv_ss[j] + reach + 12.0};
  }
  return s;
}

void WriteSyntheticHistory(std::ostream& out, const SyntheticOptions& options, std::int64_t count) {
  SyntheticPlant plant(options);
  for (std::int64_t k = 0; k < count; ++k) out << SerializeSnapshot(plant.Next()) << "\n";
}

}  // namespace lpx
