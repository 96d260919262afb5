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

// Deterministic synthetic controller histories for load and throughput
// runs: a fixed sparse gain model with drifting disturbances, occasional
// out-of-service MVs, operator clamps and unreachable CV limits.

#ifndef LPX_SYNTHETIC_HPP_
#define LPX_SYNTHETIC_HPP_

#include <cstdint>
#include <iosfwd>
#include <random>

#include "lpx/snapshot.hpp"

namespace lpx {

struct SyntheticOptions {
  int n = 30;
  int m = 63;
  std::uint64_t seed = 1;
  std::int64_t start_epoch = 1704067200;  // 2024-01-01T00:00:00Z
  int interval_seconds = 60;
  double oos_rate = 0.003;       // per MV per interval
  double clamp_rate = 0.01;      // per MV per interval
  double infeasible_rate = 0.01; // per interval
};

class SyntheticPlant {
 public:
  explicit SyntheticPlant(const SyntheticOptions& options);
  // Snapshot for the next interval.
  ControllerSnapshot Next();

 private:
  double Uniform();  // [0, 1), platform independent

  SyntheticOptions options_;
  std::mt19937_64 rng_;
  std::int64_t step_ = 0;
  ControllerSnapshot model_;
  Vector disturbance_;
};

// Writes `count` snapshots as JSON Lines.
void WriteSyntheticHistory(std::ostream& out, const SyntheticOptions& options, std::int64_t count);

// "YYYY-MM-DDTHH:MM:SSZ" for seconds since the epoch.
std::string FormatTimestamp(std::int64_t epoch_seconds);

}  // namespace lpx

#endif  // LPX_SYNTHETIC_HPP_
