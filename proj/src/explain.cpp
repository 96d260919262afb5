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

#include "lpx/explain.hpp"

namespace lpx {

std::string_view SideName(Side side) { return side == Side::kHi ? "HI" : "LO"; }

ExplanationDocument Explain(const ControllerSnapshot& snapshot) {
  ExplanationDocument doc;
  doc.timestamp = snapshot.timestamp;
  doc.mvs = snapshot.mvs;
  doc.cvs = snapshot.cvs;
  doc.solution = Solve(snapshot);
  doc.kkt = KktResiduals(snapshot, doc.solution);
  if (!doc.kkt.passed) doc.warnings.push_back("KKT residuals exceed tolerance");
  if (doc.solution.degenerate) doc.warnings.push_back("degenerate vertex: basis reported");
  if (doc.solution.dual_degenerate) {
    doc.warnings.push_back("alternative optima: cost vector on a cone boundary");
  }
  for (int j : doc.solution.infeasible_cvs) {
    doc.warnings.push_back("CV " + snapshot.cvs[j].id + " given up");
  }

  doc.active = Partition(snapshot, doc.solution);
  InvertActive(doc.active);
  if (doc.active.ill_conditioned) {
    doc.warnings.push_back("G_A condition estimate above 1e8");
  }
  doc.lambda_analytic = AnalyticShadowPrices(doc.active);
  doc.matrices = Contributions(doc.active);
  Normalize(doc.matrices);
  doc.penalty = PenaltyMatrix(doc.matrices);
  doc.assignment = Assign(doc.penalty);
  if (doc.assignment.forbidden_used) {
    doc.warnings.push_back("assignment uses a structurally zero pairing");
  }
  for (Index j = 0; j < doc.active.k(); ++j) {
    if (doc.matrices.anomalous[j]) {
      doc.warnings.push_back("CV " + snapshot.cvs[doc.active.cv_c[j]].id +
                             " has no negative contribution");
    }
  }

  for (const Pair& p : doc.assignment.pairs) {
    ExplainedPair e;
    e.mv = doc.active.mv_u[p.row];
    e.cv = doc.active.cv_c[p.col];
    e.mv_id = snapshot.mvs[e.mv].id;
    e.cv_id = snapshot.cvs[e.cv].id;
    e.side = doc.active.cv_at_upper[p.col] ? Side::kHi : Side::kLo;
    e.penalty = p.penalty;
    e.local_best = p.local_best;
    e.forbidden = p.forbidden;
    doc.pairs.push_back(std::move(e));
  }
  if (doc.active.k() == 2) {
    try {
      doc.delta_p = ComputeDeltaP(doc.active, doc.matrices);
    } catch (const Error&) {
      // Not a shared-preference pair; nothing to report.
    }
  }
  return doc;
}

}  // namespace lpx
