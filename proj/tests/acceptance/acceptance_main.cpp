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

// Acceptance suite: one PASS/FAIL line per acceptance criterion. Exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "lpx/history.hpp"
#include "lpx/sensitivity.hpp"
#include "lpx/synthetic.hpp"
#include "random_snapshot.hpp"

namespace lpx {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// Collects failed checks for one criterion.
class Verdict {
 public:
  void Check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ |= !ok;
  }
  void Near(double got, double want, double tol, const std::string& what) {
    std::ostringstream os;
    os << what << " = " << got << ", want " << want << " +- " << tol;
    Check(std::abs(got - want) <= tol, os.str());
  }
  void Note(const std::string& note) { notes_.push_back(note); }
  bool failed() const { return failed_; }

  std::string Summary() const {
    std::string out;
    for (const auto& n : notes_) out += (out.empty() ? "" : "; ") + n;
    for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + std::string("FAILED ") + f;
    return out;
  }

 private:
  int checks_ = 0;
  bool failed_ = false;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string Fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

ControllerSnapshot Fixture() { return LoadSnapshot(LPX_FIXTURE_DIR "/sec32.json"); }

bool RelClose(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// 1. Golden two-MV reproduction.
Verdict GoldenFixture() {
  Verdict v;
  const auto t0 = Clock::now();
  const ExplanationDocument doc = Explain(Fixture());
  const double elapsed = Seconds(t0);
  const Matrix& inv = doc.active.g_a_inv;
  v.Check(doc.active.k() == 2, "k = 2");
  if (doc.active.k() != 2) return v;
  v.Near(inv(0, 0), -6.5094, 1e-3, "G_A^-1(1,1)");
  v.Near(inv(0, 1), 0.0814, 1e-3, "G_A^-1(1,2)");
  v.Near(inv(1, 0), 251.4239, 1e-3, "G_A^-1(2,1)");
  v.Near(inv(1, 1), 9.3572, 1e-3, "G_A^-1(2,2)");
  v.Near(doc.solution.lambda[0], -56.22, 0.01, "lambda1");
  v.Near(doc.solution.lambda[1], 1.95, 0.01, "lambda2");
  const Matrix& w = doc.matrices.w;
  const Matrix& wc = doc.matrices.w_corr;
  const double w_want[2][2] = {{-81.37, 1.02}, {25.14, 0.94}};
  const double wc_want[2][2] = {{-81.37, -1.02}, {25.14, -0.94}};
  const double pi_want[2][2] = {{-1.0, -1.0}, {0.309, -0.92}};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const std::string at = "(" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")";
      v.Near(w(r, c), w_want[r][c], 0.01, "W" + at);
      v.Near(wc(r, c), wc_want[r][c], 0.01, "Wcorr" + at);
      v.Near(doc.matrices.pi(r, c), pi_want[r][c], 0.005, "Pi" + at);
    }
  }
  v.Check(doc.delta_p.has_value(), "delta_p present");
  if (doc.delta_p) {
    v.Near(doc.delta_p->p_diag, -1.92, 0.01, "P_diag");
    v.Near(doc.delta_p->p_off, -0.69, 0.01, "P_off");
  }
  v.Check(doc.pairs.size() == 2 && doc.pairs[0].mv_id == "MV1" && doc.pairs[0].cv_id == "CV1" &&
              doc.pairs[1].mv_id == "MV2" && doc.pairs[1].cv_id == "CV2",
          "assignment {MV1->CV1, MV2->CV2}");
  v.Check(elapsed < 1.0, "runtime < 1 s");
  v.Note("assignment MV1->CV1 (HI), MV2->CV2 (LO); runtime " + Fmt("%.4f", elapsed) + " s");
  return v;
}

// 2. Factorized Delta P.
Verdict DeltaPIdentity() {
  Verdict v;
  const ExplanationDocument doc = Explain(Fixture());
  v.Check(doc.delta_p.has_value(), "fixture delta_p present");
  if (doc.delta_p) {
    const DeltaP& d = *doc.delta_p;
    v.Near(d.direct, -1.23, 0.01, "fixture P_diag - P_off");
    v.Check(std::abs(d.factorized - d.direct) <= 1e-9 * std::abs(d.direct),
            "fixture factorized within 1e-9 relative of direct");
    v.Note("fixture dP = " + Fmt("%.6f", d.factorized));
  }

  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> expo(-3.0, 3.0);
  int checked = 0, worst_trial = -1;
  double worst = 0.0;
  for (int trial = 0; checked < 1000 && trial < 200000; ++trial) {
    ActiveSet a;
    a.mv_u = {0, 1};
    a.cv_c = {0, 1};
    a.g_a = Matrix(2, 2);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) a.g_a(r, c) = unit(rng) * std::pow(10.0, expo(rng));
    }
    a.c_u = Vector{{unit(rng) * std::pow(10.0, expo(rng)), unit(rng) * std::pow(10.0, expo(rng))}};
    a.lambda_active = a.g_a.transpose().partialPivLu().solve(a.c_u);
    a.cv_at_upper = {a.lambda_active[0] < 0, a.lambda_active[1] < 0};
    try {
      InvertActive(a);
      if (a.ill_conditioned) continue;
      ContributionMatrices m = Contributions(a);
      Normalize(m);
      const DeltaP d = ComputeDeltaP(a, m);
      const double rel = std::abs(d.factorized - d.direct) / std::abs(d.direct);
      if (rel > worst) {
        worst = rel;
        worst_trial = trial;
      }
      ++checked;
    } catch (const Error&) {
      continue;  // no shared preference or singular draw
    }
  }
  v.Check(checked == 1000, "1000 shared-preference instances drawn");
  v.Check(worst <= 1e-9, "random identity within 1e-9 relative (worst trial " +
                             std::to_string(worst_trial) + ")");
  v.Note(std::to_string(checked) + " random instances, worst relative gap " + Fmt("%.2e", worst));
  return v;
}

// 3. Cost-angle sweep regions.
Verdict SweepRegions() {
  Verdict v;
  const auto t0 = Clock::now();
  const SweepResult r = SweepCostRatio(Fixture(), 0, 1, 36000);
  v.Check(r.regions.size() == 4, "exactly 4 regions (got " + std::to_string(r.regions.size()) + ")");
  int min_samples = 1 << 30;
  for (const auto& region : r.regions) {
    std::set<std::string> signatures;
    int count = 0;
    for (const auto& s : r.samples) {
      if (s.failed || s.degenerate) continue;
      double t = s.theta;
      if (t < region.begin) t += 2 * M_PI;
      if (t <= region.begin || t >= region.end) continue;
      signatures.insert(s.active_signature);
      ++count;
    }
    min_samples = std::min(min_samples, count);
    v.Check(signatures.size() == 1, "constant active-set signature within a region");
    v.Check(count >= 90, "at least 90 samples in region " + std::to_string(region.vertex));
  }
  v.Note("36000 steps, 4 regions, fewest samples in a region " + std::to_string(min_samples) +
         ", " + Fmt("%.2f", Seconds(t0)) + " s");
  return v;
}

double BruteForceMinimum(const Matrix& cost) {
  std::vector<int> perm(static_cast<std::size_t>(cost.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = kInf;
  do {
    double total = 0.0;
    for (std::size_t r = 0; r < perm.size(); ++r) total += cost(static_cast<Index>(r), perm[r]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// 4. Oracle equivalence.
Verdict OracleEquivalence() {
  Verdict v;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> pick_n(1, 3), pick_m(1, 5);
  int lp_cases = 0;
  for (int trial = 0; lp_cases < 1000; ++trial) {
    const auto s = testing::RandomSnapshot(rng, {.n = pick_n(rng), .m = pick_m(rng)});
    const LPSolution sol = Solve(s);
    double best = kInf;
    for (const auto& vert : EnumerateVertices(s)) {
      if (vert.feasible) best = std::min(best, vert.objective);
    }
    v.Check(RelClose(sol.objective, best, 1e-9), "LP trial " + std::to_string(trial));
    ++lp_cases;
  }

  std::uniform_int_distribution<int> pick_k(1, 7), small(-5, 5);
  std::uniform_real_distribution<double> real(-1.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = pick_k(rng);
    Matrix c(k, k);
    for (Index r = 0; r < k; ++r) {
      for (Index q = 0; q < k; ++q) c(r, q) = trial % 2 ? small(rng) : real(rng);
    }
    const auto perm = Hungarian(c);
    double total = 0.0;
    for (int r = 0; r < k; ++r) total += c(r, perm[static_cast<std::size_t>(r)]);
    v.Check(total == BruteForceMinimum(c), "Hungarian trial " + std::to_string(trial));
  }
  v.Note("1000 LPs vs vertex enumeration, 1000 assignments vs k! brute force");
  return v;
}

std::optional<ExplanationDocument> WellPosed(std::mt19937_64& rng, ControllerSnapshot* s) {
  *s = testing::RandomSquareish(rng, 5);
  try {
    ExplanationDocument doc = Explain(*s);
    if (doc.active.k() == 0 || doc.solution.degenerate || doc.solution.dual_degenerate ||
        doc.active.ill_conditioned) {
      return std::nullopt;
    }
    return doc;
  } catch (const Error&) {
    return std::nullopt;
  }
}

using PairKey = std::tuple<std::string, std::string, Side>;

std::set<PairKey> PairSet(const ExplanationDocument& doc) {
  std::set<PairKey> out;
  for (const auto& p : doc.pairs) out.insert({p.mv_id, p.cv_id, p.side});
  return out;
}

bool SamePi(const ExplanationDocument& a, const ExplanationDocument& b) {
  if (a.active.mv_u != b.active.mv_u || a.active.cv_c != b.active.cv_c) return false;
  const Matrix& x = a.matrices.pi;
  const Matrix& y = b.matrices.pi;
  for (Index r = 0; r < x.rows(); ++r) {
    for (Index c = 0; c < x.cols(); ++c) {
      if (std::abs(x(r, c) - y(r, c)) > 1e-9 * std::max(1.0, std::abs(x(r, c)))) return false;
    }
  }
  return true;
}

// Cells equal to -1 that are the unique finite minimum of their row and
// column.
std::vector<std::pair<Index, Index>> DoublyUniqueMinusOnes(const Matrix& p) {
  std::vector<std::pair<Index, Index>> out;
  for (Index r = 0; r < p.rows(); ++r) {
    for (Index c = 0; c < p.cols(); ++c) {
      if (p(r, c) != -1.0) continue;
      bool unique = true;
      for (Index q = 0; q < p.cols(); ++q) unique &= q == c || p(r, q) > -1.0;
      for (Index q = 0; q < p.rows(); ++q) unique &= q == r || p(q, c) > -1.0;
      if (unique) out.push_back({r, c});
    }
  }
  return out;
}

// 5. Invariant suite.
Verdict Invariants() {
  Verdict v;
  std::mt19937_64 rng(5);

  int kkt = 0;
  for (int trial = 0; kkt < 1000; ++trial) {
    const auto s = testing::RandomSnapshot(
        rng, {.n = 1 + trial % 5, .m = 1 + trial % 7, .feasible_origin = trial % 3 != 0});
    LPSolution sol;
    try {
      sol = Solve(s);
    } catch (const Error&) {
      continue;
    }
    const KktReport r = KktResiduals(s, sol);
    v.Check(r.passed && r.stationarity_max <= r.tolerance, "KKT trial " + std::to_string(trial));
    ++kkt;
  }

  int sums = 0, scaled = 0, rescaled = 0;
  std::uniform_real_distribution<double> log_alpha(std::log(1e-3), std::log(1e3));
  for (int trial = 0; sums < 1000 || scaled < 1000 || rescaled < 1000; ++trial) {
    ControllerSnapshot s;
    const auto doc = WellPosed(rng, &s);
    if (!doc) continue;
    if (sums < 1000) {
      const Vector col = doc->matrices.w.colwise().sum().transpose();
      for (Index j = 0; j < doc->active.k(); ++j) {
        const double lambda = doc->solution.lambda[doc->active.cv_c[j]];
        v.Check(std::abs(col[j] - lambda) <= 1e-9 * std::max(1.0, std::abs(lambda)),
                "column sum trial " + std::to_string(trial));
      }
      ++sums;
    }
    if (scaled < 1000) {
      ControllerSnapshot t = s;
      t.costs *= std::exp(log_alpha(rng));
      const auto other = Explain(t);
      v.Check(SamePi(*doc, other) && PairSet(*doc) == PairSet(other),
              "cost scaling trial " + std::to_string(trial));
      ++scaled;
    }
    if (rescaled < 1000) {
      const auto t = testing::RescaleUnits(s, testing::LogUniform(rng, s.n(), 1e-3, 1e3),
                                           testing::LogUniform(rng, s.m(), 1e-3, 1e3));
      const auto other = Explain(t);
      v.Check(SamePi(*doc, other) && PairSet(*doc) == PairSet(other),
              "unit rescaling trial " + std::to_string(trial));
      ++rescaled;
    }
  }

  int cells = 0, held = 0;
  std::string first_counterexample;
  for (int trial = 0; cells < 1000; ++trial) {
    ControllerSnapshot s;
    const auto doc = WellPosed(rng, &s);
    if (!doc) continue;
    for (const auto& [r, c] : DoublyUniqueMinusOnes(doc->penalty)) {
      if (cells == 1000) break;
      ++cells;
      if (doc->assignment.assignment(r, c) == 1) {
        ++held;
      } else if (first_counterexample.empty()) {
        std::ostringstream os;
        os << "trial " << trial << " k=" << doc->active.k() << " cell (" << r << "," << c
           << ")";
        first_counterexample = os.str();
      }
    }
  }
  v.Check(held == cells, "predetermined pair assigned in " + std::to_string(held) + "/" +
                             std::to_string(cells) + " cases, first miss " + first_counterexample);
  v.Note("KKT " + std::to_string(kkt) + ", column sums " + std::to_string(sums) +
         ", cost scaling " + std::to_string(scaled) + ", unit rescaling " +
         std::to_string(rescaled) + ", predetermined pair " + std::to_string(held) + "/" +
         std::to_string(cells));
  return v;
}

// 6. History throughput and determinism.
Verdict HistoryThroughput() {
  Verdict v;
  SyntheticOptions o;  // 30 MV x 63 CV
  o.seed = 2026;
  std::ostringstream text;
  WriteSyntheticHistory(text, o, 10000);
  const std::string jsonl = text.str();
  auto run = [&] {
    std::istringstream in(jsonl);
    HistoryAggregator agg;
    StreamHistory(in, {}, [&](const HistoryRun& ids, IntervalRecord&& r) { agg.Add(ids, r); });
    const HistoryReport report = agg.Finish(3);
    return HistoryReportToJson(report).dump(2) + "\n" + RenderHistoryMarkdown(report) +
           RenderHistoryCsv(report);
  };
  const auto t0 = Clock::now();
  const std::string first = run();
  const double t1 = Seconds(t0);
  const auto t2 = Clock::now();
  const std::string second = run();
  const double t3 = Seconds(t2);
  v.Check(t1 < 300.0 && t3 < 300.0, "each run under 5 minutes");
  v.Check(first == second, "byte-identical reports");
  v.Note("10000 x (30 MV, 63 CV): run 1 " + Fmt("%.1f", t1) + " s, run 2 " + Fmt("%.1f", t3) +
         " s on " + std::to_string(std::thread::hardware_concurrency()) + " core(s), " +
         std::to_string(first.size()) + " bytes identical");
  return v;
}

}  // namespace
}  // namespace lpx

int main() {
  struct Criterion {
    const char* name;
    std::function<lpx::Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {"golden two-MV reproduction", lpx::GoldenFixture},
      {"factorized Delta P identity", lpx::DeltaPIdentity},
      {"cost-angle sweep has 4 regions", lpx::SweepRegions},
      {"oracle equivalence (LP, assignment)", lpx::OracleEquivalence},
      {"invariant suite", lpx::Invariants},
      {"history throughput and determinism", lpx::HistoryThroughput},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    lpx::Verdict v;
    try {
      v = criteria[k].run();
    } catch (const std::exception& e) {
      v.Check(false, std::string("exception: ") + e.what());
    }
    failed += v.failed();
    std::printf("[%s] %zu %s: %s\n", v.failed() ? "FAIL" : "PASS", k + 1, criteria[k].name,
                v.Summary().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
