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

#include "lpx/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace lpx {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kVertexTolerance = 1e-6;
constexpr int kMaxFlipsPerGap = 8;

bool SameVertex(const Vector& a, const Vector& b) {
  const double scale = std::max(1.0, a.lpNorm<Eigen::Infinity>());
  return (a - b).lpNorm<Eigen::Infinity>() <= kVertexTolerance * scale;
}

bool Usable(const SweepSample& s) { return !s.failed && !s.degenerate; }

bool SameClass(const SweepSample& a, const SweepSample& b) {
  return Usable(a) && Usable(b) && SameVertex(a.delta_mv, b.delta_mv) &&
         a.pairing_signature == b.pairing_signature;
}

std::string ActiveSignature(const ExplanationDocument& doc) {
  std::string out;
  for (std::size_t r = 0; r < doc.active.mv_u.size(); ++r) {
    if (r) out += ",";
    out += doc.mvs[doc.active.mv_u[r]].id;
  }
  out += "|";
  for (std::size_t c = 0; c < doc.active.cv_c.size(); ++c) {
    if (c) out += ",";
    out += doc.cvs[doc.active.cv_c[c]].id + (doc.active.cv_at_upper[c] ? "-HI" : "-LO");
  }
  return out;
}

std::string PairingSignature(const ExplanationDocument& doc) {
  std::string out;
  for (const ExplainedPair& p : doc.pairs) {
    if (!out.empty()) out += ";";
    out += p.mv_id + ">" + p.cv_id + "-" + std::string(SideName(p.side));
  }
  return out;
}

class Sweeper {
 public:
  Sweeper(const ControllerSnapshot& snapshot, int mv_i, int mv_j)
      : base_(snapshot), mv_i_(mv_i), mv_j_(mv_j) {}

  SweepSample Evaluate(double theta) const {
    SweepSample s;
    s.theta = std::fmod(theta, kTwoPi);
    ControllerSnapshot snap = base_;
    snap.costs[mv_i_] = std::cos(s.theta);
    snap.costs[mv_j_] = std::sin(s.theta);
    try {
      const ExplanationDocument doc = Explain(snap);
      s.delta_mv = doc.solution.delta_mv;
      s.active_signature = ActiveSignature(doc);
      s.pairing_signature = PairingSignature(doc);
      s.degenerate = doc.solution.dual_degenerate;
    } catch (const Error& e) {
      s.failed = true;
      s.error = e.Describe();
    }
    return s;
  }

 private:
  const ControllerSnapshot& base_;
  int mv_i_;
  int mv_j_;
};

FlipKind Classify(const SweepSample& a, const SweepSample& b) {
  const bool vertex = !SameVertex(a.delta_mv, b.delta_mv);
  const bool pairing = a.pairing_signature != b.pairing_signature;
  if (vertex && pairing) return FlipKind::kBoth;
  return vertex ? FlipKind::kVertex : FlipKind::kPairing;
}

}  // namespace

std::string_view FlipKindName(FlipKind kind) {
  switch (kind) {
    case FlipKind::kVertex: return "vertex";
    case FlipKind::kPairing: return "pairing";
    case FlipKind::kBoth: return "both";
  }
  return "unknown";
}

DeltaP ComputeDeltaP(const ActiveSet& active, const ContributionMatrices& matrices) {
  if (active.k() != 2) {
    throw Error(ErrorCode::kNotApplicable, "sensitivity",
                "requires a 2x2 active set, got k = " + std::to_string(active.k()));
  }
  const Matrix& pi = matrices.pi;
  if (matrices.anomalous[0] || matrices.anomalous[1]) {
    throw Error(ErrorCode::kNotApplicable, "sensitivity", "anomalous contribution column");
  }
  int shared = -1;
  for (int r = 0; r < 2 && shared < 0; ++r) {
    if (pi(r, 0) == -1.0 && pi(r, 1) == -1.0) shared = r;
  }
  if (shared < 0) {
    throw Error(ErrorCode::kNotApplicable, "sensitivity",
                "the two CVs do not share a locally best MV");
  }
  const Matrix& g = active.g_a_inv;
  const Vector& c = active.c_u;
  const Vector& s = matrices.sign;
  DeltaP out;
  out.shared_row = shared;
  if (shared == 0) {
    out.factorized = c[1] / std::abs(c[0]) *
                     (g(1, 1) * s[1] / std::abs(g(0, 1)) - g(1, 0) * s[0] / std::abs(g(0, 0)));
  } else {
    out.factorized = c[0] / std::abs(c[1]) *
                     (g(0, 0) * s[0] / std::abs(g(1, 0)) - g(0, 1) * s[1] / std::abs(g(1, 1)));
  }
  out.p_diag = pi(0, 0) + pi(1, 1);
  out.p_off = pi(0, 1) + pi(1, 0);
  // Same as p_diag - p_off, grouped so the shared -1 entries cancel exactly.
  out.direct = (pi(0, 0) - pi(0, 1)) + (pi(1, 1) - pi(1, 0));
  return out;
}

SweepResult SweepCostRatio(const ControllerSnapshot& snapshot, int mv_i, int mv_j,
                           int steps, const SweepOptions& options) {
  const int n = static_cast<int>(snapshot.n());
  if (steps < kMinSweepSteps) {
    throw Error(ErrorCode::kInvalidArgument, "sensitivity",
                "steps must be at least " + std::to_string(kMinSweepSteps));
  }
  if (mv_i < 0 || mv_i >= n || mv_j < 0 || mv_j >= n || mv_i == mv_j) {
    throw Error(ErrorCode::kInvalidArgument, "sensitivity", "invalid MV pair");
  }
  if (!snapshot.mvs[mv_i].in_service || !snapshot.mvs[mv_j].in_service) {
    throw Error(ErrorCode::kInvalidArgument, "sensitivity", "both swept MVs must be in service");
  }
  const Sweeper sweeper(snapshot, mv_i, mv_j);
  SweepResult result;
  result.mv_i = snapshot.mvs[mv_i].id;
  result.mv_j = snapshot.mvs[mv_j].id;
  result.steps = steps;

  std::vector<SweepSample> coarse;
  coarse.reserve(steps);
  for (int s = 0; s < steps; ++s) coarse.push_back(sweeper.Evaluate(kTwoPi * s / steps));
  std::vector<int> usable;
  for (int s = 0; s < steps; ++s) {
    if (Usable(coarse[s])) usable.push_back(s);
  }

  std::vector<SweepSample> refined;
  // Vertex boundary that closes each usable run, keyed by the usable position.
  std::vector<double> vertex_boundary(usable.size(), -1.0);
  for (std::size_t u = 0; u < usable.size() && usable.size() > 1; ++u) {
    const SweepSample& a = coarse[usable[u]];
    const bool wrap = u + 1 == usable.size();
    const SweepSample& b = coarse[usable[wrap ? 0 : u + 1]];
    if (SameClass(a, b)) continue;
    double lo = a.theta;
    const double end = wrap ? b.theta + kTwoPi : b.theta;
    SweepSample lo_s = a;
    for (int flips = 0; flips < kMaxFlipsPerGap && !SameClass(lo_s, b); ++flips) {
      double hi = end;
      SweepSample hi_s = b;
      while (hi - lo > options.refine_width) {
        const double mid = 0.5 * (lo + hi);
        SweepSample m = sweeper.Evaluate(mid);
        m.refined = true;
        m.theta = mid >= kTwoPi ? mid - kTwoPi : mid;
        refined.push_back(m);
        if (SameClass(m, lo_s)) {
          lo = mid;
          lo_s = m;
        } else {
          hi = mid;
          hi_s = m;
        }
      }
      const SweepSample& right = Usable(hi_s) ? hi_s : b;
      FlipPoint flip;
      flip.theta = std::fmod(0.5 * (lo + hi), kTwoPi);
      flip.width = hi - lo;
      flip.kind = Classify(lo_s, right);
      flip.before = lo_s.pairing_signature;
      flip.after = right.pairing_signature;
      result.flips.push_back(flip);
      if (flip.kind != FlipKind::kPairing) vertex_boundary[u] = 0.5 * (lo + hi);
      if (!Usable(hi_s)) break;
      lo = hi;
      lo_s = hi_s;
    }
    if (vertex_boundary[u] < 0.0 && !SameVertex(a.delta_mv, b.delta_mv)) {
      vertex_boundary[u] = 0.5 * (a.theta + end);
    }
  }

  // Regions: runs of usable coarse samples with one vertex, closed on the
  // circle.
  struct Run {
    std::size_t first;
    std::size_t last;
  };
  std::vector<Run> runs;
  for (std::size_t u = 0; u < usable.size(); ++u) {
    if (!runs.empty() && SameVertex(coarse[usable[runs.back().last]].delta_mv,
                                    coarse[usable[u]].delta_mv)) {
      runs.back().last = u;
    } else {
      runs.push_back({u, u});
    }
  }
  if (runs.size() > 1 && SameVertex(coarse[usable[runs.front().first]].delta_mv,
                                    coarse[usable[runs.back().last]].delta_mv)) {
    runs.front().first = runs.back().first;
    runs.pop_back();
  }

  result.samples = std::move(coarse);
  result.samples.insert(result.samples.end(), refined.begin(), refined.end());
  std::stable_sort(result.samples.begin(), result.samples.end(),
                   [](const SweepSample& a, const SweepSample& b) { return a.theta < b.theta; });
  std::vector<Vector> vertices;
  for (SweepSample& s : result.samples) {
    if (s.failed) continue;
    auto it = std::find_if(vertices.begin(), vertices.end(),
                           [&](const Vector& v) { return SameVertex(v, s.delta_mv); });
    s.vertex = static_cast<int>(it - vertices.begin());
    if (it == vertices.end()) vertices.push_back(s.delta_mv);
  }

  for (std::size_t r = 0; r < runs.size(); ++r) {
    SweepRegion region;
    const Run& run = runs[r];
    if (runs.size() == 1) {
      region.begin = 0.0;
      region.end = kTwoPi;
    } else {
      const Run& prev = runs[(r + runs.size() - 1) % runs.size()];
      region.begin = std::fmod(vertex_boundary[prev.last], kTwoPi);
      region.end = std::fmod(vertex_boundary[run.last], kTwoPi);
      if (region.end <= region.begin) region.end += kTwoPi;
    }
    for (const SweepSample& s : result.samples) {
      if (!Usable(s)) continue;
      const double t = s.theta < region.begin ? s.theta + kTwoPi : s.theta;
      if (t >= region.begin && t <= region.end) {
        if (region.samples == 0) {
          region.delta_mv = s.delta_mv;
          region.vertex = s.vertex;
        }
        ++region.samples;
      }
    }
    result.regions.push_back(region);
  }
  std::sort(result.regions.begin(), result.regions.end(),
            [](const SweepRegion& a, const SweepRegion& b) { return a.begin < b.begin; });
  std::sort(result.flips.begin(), result.flips.end(),
            [](const FlipPoint& a, const FlipPoint& b) { return a.theta < b.theta; });
  return result;
}

nlohmann::json SweepToJson(const SweepResult& result) {
  using nlohmann::json;
  json samples = json::array();
  for (const SweepSample& s : result.samples) {
    json j = {{"theta", s.theta},
              {"vertex", s.vertex},
              {"active_signature", s.active_signature},
              {"pairing_signature", s.pairing_signature},
              {"degenerate", s.degenerate},
              {"failed", s.failed},
              {"refined", s.refined}};
    if (!s.failed) j["delta_mv"] = VectorToJson(s.delta_mv);
    if (s.failed) j["error"] = s.error;
    samples.push_back(std::move(j));
  }
  json regions = json::array();
  for (const SweepRegion& r : result.regions) {
    regions.push_back({{"begin", r.begin},
                       {"end", r.end},
                       {"vertex", r.vertex},
                       {"delta_mv", VectorToJson(r.delta_mv)},
                       {"samples", r.samples}});
  }
  json flips = json::array();
  for (const FlipPoint& f : result.flips) {
    flips.push_back({{"theta", f.theta},
                     {"width", f.width},
                     {"kind", FlipKindName(f.kind)},
                     {"before", f.before},
                     {"after", f.after}});
  }
  return {{"schema_version", "lpx.sweep/1"},
          {"mvs", {result.mv_i, result.mv_j}},
          {"steps", result.steps},
          {"regions", std::move(regions)},
          {"flip_points", std::move(flips)},
          {"samples", std::move(samples)}};
}

std::string SweepToCsv(const SweepResult& result) {
  std::ostringstream out;
  out << "theta,vertex,pairing_signature,degenerate,refined\n";
  char buf[32];
  for (const SweepSample& s : result.samples) {
    std::snprintf(buf, sizeof(buf), "%.9f", s.theta);
    out << buf << "," << s.vertex << "," << s.pairing_signature << ","
        << (s.degenerate ? 1 : 0) << "," << (s.refined ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace lpx
