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
#include <random>

#include <gtest/gtest.h>

#include "lpx/lp.hpp"
#include "random_snapshot.hpp"

namespace lpx {
namespace {

using testing::RandomSnapshot;
using testing::RandomSpec;

ControllerSnapshot TwoMvFixture() {
  return LoadSnapshot(LPX_FIXTURE_DIR "/sec32.json");
}

double RelDiff(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Minimum objective over feasible enumerated vertices, or +inf.
double OracleMinimum(const ControllerSnapshot& s) {
  double best = kInf;
  for (const auto& v : EnumerateVertices(s)) {
    if (v.feasible) best = std::min(best, v.objective);
  }
  return best;
}

TEST(SolveTest, TwoMvFixtureStatusesAndDuals) {
  const auto s = TwoMvFixture();
  const LPSolution sol = Solve(s);
  EXPECT_EQ(sol.cv_status[0], ConstraintStatus::kAtUpper);
  EXPECT_EQ(sol.cv_status[1], ConstraintStatus::kAtLower);
  EXPECT_EQ(sol.cv_status[2], ConstraintStatus::kFreeWithin);
  EXPECT_EQ(sol.mv_status[0], ConstraintStatus::kFreeWithin);
  EXPECT_EQ(sol.mv_status[1], ConstraintStatus::kFreeWithin);
  EXPECT_NEAR(sol.lambda[0], -56.22, 0.01);
  EXPECT_NEAR(sol.lambda[1], 1.95, 0.01);
  EXPECT_EQ(sol.lambda[2], 0.0);
  EXPECT_TRUE(sol.infeasible_cvs.empty());
  EXPECT_FALSE(sol.degenerate);
}

TEST(SolveTest, TwoMvFixtureVertexMatchesActiveSystem) {
  const auto s = TwoMvFixture();
  const LPSolution sol = Solve(s);
  Matrix ga(2, 2);
  ga << -0.115, 0.001, 3.090, 0.080;
  const Vector expected = ga.partialPivLu().solve(Vector{{0.7, -27.0}});
  EXPECT_NEAR(sol.delta_mv[0], expected[0], 1e-6);
  EXPECT_NEAR(sol.delta_mv[1], expected[1], 1e-6);
  EXPECT_NEAR(sol.delta_mv[0], -6.8, 0.05);
  EXPECT_NEAR(sol.delta_mv[1], -76.6, 0.05);
  EXPECT_LE(RelDiff(sol.objective, OracleMinimum(s)), 1e-9);
}

TEST(SolveTest, ZeroCostStaysAtCurrentPoint) {
  auto s = TwoMvFixture();
  s.costs.setZero();
  s.mv_bounds = {{0.0, 100.0}, {300.0, 500.0}};
  const LPSolution sol = Solve(s);
  EXPECT_EQ(sol.delta_mv, Vector::Zero(2));
  EXPECT_EQ(sol.objective, 0.0);
  EXPECT_EQ(sol.lambda, Vector::Zero(3));
  EXPECT_EQ(sol.mu, Vector::Zero(2));
}

TEST(SolveTest, UnboundedNamesTheMv) {
  auto s = TwoMvFixture();
  s.gains.col(1).setZero();
  try {
    Solve(s);
    FAIL() << "expected Unbounded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnbounded);
    EXPECT_NE(std::string(e.what()).find("MV2"), std::string::npos) << e.what();
  }
}

TEST(SolveTest, NoInServiceMv) {
  auto s = TwoMvFixture();
  for (auto& mv : s.mvs) mv.in_service = false;
  try {
    Solve(s);
    FAIL() << "expected NoInServiceMV";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoInServiceMV);
  }
}

TEST(SolveTest, OutOfServiceMvIsPinned) {
  auto s = TwoMvFixture();
  s.mvs[0].in_service = false;
  s.mv_bounds[1] = {0.0, 1000.0};
  const LPSolution sol = Solve(s);
  EXPECT_EQ(sol.delta_mv[0], 0.0);
  EXPECT_EQ(sol.mv_status[0], ConstraintStatus::kPinned);
  EXPECT_TRUE(KktResiduals(s, sol).passed);
}

TEST(SolveTest, GivesUpLeastImportantCv) {
  // Two CVs on one MV that cannot both hold: the rank-2 CV is relaxed.
  ControllerSnapshot s;
  s.timestamp = "2024-01-01T00:00:00Z";
  s.mvs = {{"MV1", VariableKind::kMV, 0, true, {}}};
  s.cvs = {{"CV1", VariableKind::kCV, 0, true, {}}, {"CV2", VariableKind::kCV, 1, true, {}}};
  s.gains = Matrix{{1.0}, {1.0}};
  s.costs = Vector{{1.0}};
  s.mv_current = Vector{{0.0}};
  s.mv_bounds = {{-10.0, 10.0}};
  s.cv_ss = Vector{{0.0, 0.0}};
  s.cv_bounds = {{1.0, 2.0}, {-2.0, -1.0}};
  s.cv_rank = {2, 1};
  const LPSolution sol = Solve(s);
  ASSERT_EQ(sol.infeasible_cvs, std::vector<int>{0});
  EXPECT_EQ(sol.cv_status[0], ConstraintStatus::kGivenUpLower);
  EXPECT_EQ(sol.cv_status[1], ConstraintStatus::kAtLower);
  EXPECT_DOUBLE_EQ(sol.delta_mv[0], -2.0);

  s.cv_rank = {1, 2};
  const LPSolution flipped = Solve(s);
  ASSERT_EQ(flipped.infeasible_cvs, std::vector<int>{1});
  EXPECT_EQ(flipped.cv_status[1], ConstraintStatus::kGivenUpUpper);
  EXPECT_DOUBLE_EQ(flipped.delta_mv[0], 1.0);
}

TEST(SolveTest, GiveUpTieGoesToHigherIndex) {
  ControllerSnapshot s;
  s.timestamp = "2024-01-01T00:00:00Z";
  s.mvs = {{"MV1", VariableKind::kMV, 0, true, {}}};
  s.cvs = {{"CV1", VariableKind::kCV, 0, true, {}}, {"CV2", VariableKind::kCV, 1, true, {}}};
  s.gains = Matrix{{1.0}, {1.0}};
  s.costs = Vector{{1.0}};
  s.mv_current = Vector{{0.0}};
  s.mv_bounds = {{-10.0, 10.0}};
  s.cv_ss = Vector{{0.0, 0.0}};
  s.cv_bounds = {{1.0, 2.0}, {-2.0, -1.0}};
  s.cv_rank = {1, 1};
  EXPECT_EQ(Solve(s).infeasible_cvs, std::vector<int>{1});
}

TEST(KktTest, PerturbedLambdaResidualIsLinear) {
  const auto s = TwoMvFixture();
  LPSolution sol = Solve(s);
  EXPECT_LE(KktResiduals(s, sol).stationarity_max, 1e-8);
  sol.lambda[1] += 1.0;
  const KktReport r = KktResiduals(s, sol);
  const Vector expected = -s.gains.row(1).transpose();
  EXPECT_NEAR(r.stationarity[0], expected[0], 1e-12);
  EXPECT_NEAR(r.stationarity[1], expected[1], 1e-12);
  EXPECT_FALSE(r.passed);
}

TEST(VertexTest, TwoMvFixtureHasFourVertices) {
  const auto vertices = EnumerateVertices(TwoMvFixture());
  const auto feasible = std::count_if(vertices.begin(), vertices.end(),
                                      [](const auto& v) { return v.feasible; });
  EXPECT_EQ(feasible, 4);
}

TEST(VertexTest, OneDimensionalEndpoints) {
  ControllerSnapshot s;
  s.timestamp = "2024-01-01T00:00:00Z";
  s.mvs = {{"MV1", VariableKind::kMV, 0, true, {}}};
  s.cvs = {{"CV1", VariableKind::kCV, 0, true, {}}};
  s.gains = Matrix{{2.0}};
  s.costs = Vector{{1.0}};
  s.mv_current = Vector{{0.0}};
  s.mv_bounds = {{-3.0, 1.0}};
  s.cv_ss = Vector{{0.0}};
  s.cv_bounds = {{-4.0, 4.0}};
  const auto vertices = EnumerateVertices(s);
  EXPECT_LE(vertices.size(), 4u);
  for (const auto& v : vertices) {
    if (!v.feasible) continue;
    EXPECT_TRUE(v.delta_mv[0] == -2.0 || v.delta_mv[0] == 1.0) << v.delta_mv[0];
  }
}

TEST(VertexTest, TooManyVariables) {
  std::mt19937_64 rng(1);
  const auto s = RandomSnapshot(rng, {.n = 13, .m = 2});
  EXPECT_THROW(EnumerateVertices(s), Error);
}

TEST(SolvePropertyTest, MatchesVertexOracle) {
  std::mt19937_64 rng(20240301);
  for (int trial = 0; trial < 1500; ++trial) {
    const int n = 1 + trial % 3;
    const int m = 1 + (trial / 3) % 5;
    const auto s = RandomSnapshot(rng, {.n = n, .m = m});
    const LPSolution sol = Solve(s);
    ASSERT_TRUE(sol.infeasible_cvs.empty());
    EXPECT_LE(RelDiff(sol.objective, OracleMinimum(s)), 1e-9) << "trial " << trial;
  }
}

TEST(SolvePropertyTest, KktHoldsIncludingGiveUps) {
  std::mt19937_64 rng(7);
  int gave_up = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    const int n = 1 + trial % 4;
    const int m = 1 + (trial / 4) % 6;
    const auto s = RandomSnapshot(rng, {.n = n, .m = m, .feasible_origin = trial % 2 == 0});
    const LPSolution sol = Solve(s);
    gave_up += sol.infeasible_cvs.empty() ? 0 : 1;
    const KktReport r = KktResiduals(s, sol);
    EXPECT_TRUE(r.passed) << "trial " << trial << " stat " << r.stationarity_max
                          << " comp " << r.complementarity_max << " primal "
                          << r.primal_max << " sign " << r.dual_sign_max;
  }
  EXPECT_GT(gave_up, 50);
}

TEST(SolvePropertyTest, CostScalingInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    auto s = RandomSnapshot(rng, {.n = 1 + trial % 3, .m = 1 + trial % 5});
    const LPSolution a = Solve(s);
    const double alpha = 0.01 + 50.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    s.costs *= alpha;
    const LPSolution b = Solve(s);
    if (a.dual_degenerate) continue;  // alternative optima
    EXPECT_LE((a.delta_mv - b.delta_mv).lpNorm<Eigen::Infinity>(), 1e-9);
    EXPECT_EQ(a.mv_status, b.mv_status);
    EXPECT_EQ(a.cv_status, b.cv_status);
    EXPECT_LE((a.lambda * alpha - b.lambda).lpNorm<Eigen::Infinity>(),
              1e-9 * std::max(1.0, b.lambda.lpNorm<Eigen::Infinity>()));
  }
}

TEST(SolvePropertyTest, GiveUpNeverIncreasesObjective) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    auto s = RandomSnapshot(rng, {.n = 2, .m = 4});
    const LPSolution full = Solve(s);
    const int j = trial % 4;
    s.cv_bounds[j] = {};
    const LPSolution relaxed = Solve(s);
    EXPECT_LE(relaxed.objective, full.objective + 1e-9 * std::max(1.0, std::abs(full.objective)));
  }
}

TEST(SolvePropertyTest, SquareActiveSetAtNondegenerateOptimum) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = RandomSnapshot(rng, {.n = 1 + trial % 3, .m = 1 + trial % 5});
    const LPSolution sol = Solve(s);
    if (sol.degenerate) continue;
    int free_mvs = 0, held_cvs = 0;
    for (auto st : sol.mv_status) free_mvs += st == ConstraintStatus::kFreeWithin;
    for (auto st : sol.cv_status) {
      held_cvs += st == ConstraintStatus::kAtLower || st == ConstraintStatus::kAtUpper;
    }
    EXPECT_EQ(free_mvs, held_cvs) << "trial " << trial;
  }
}

}  // namespace
}  // namespace lpx
