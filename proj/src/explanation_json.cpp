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
#include <cstdio>
#include <sstream>

#include "lpx/explain.hpp"

namespace lpx {

using nlohmann::json;

namespace {

json Number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json Ids(const std::vector<VariableMeta>& metas, const std::vector<int>& indices) {
  json out = json::array();
  for (int i : indices) out.push_back(metas[i].id);
  return out;
}

std::string Fixed(double x, int digits) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

std::string Pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string PadLeft(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

void RenderMatrix(std::ostringstream& out, const std::string& title,
                  const ExplanationDocument& doc, const Matrix& m, int digits) {
  out << title << "\n" << Pad("", 8);
  for (int j : doc.active.cv_c) out << PadLeft(doc.cvs[j].id, 12);
  out << "\n";
  for (Index r = 0; r < m.rows(); ++r) {
    out << Pad("  " + doc.mvs[doc.active.mv_u[r]].id, 8);
    for (Index c = 0; c < m.cols(); ++c) out << PadLeft(Fixed(m(r, c), digits), 12);
    out << "\n";
  }
  out << "\n";
}

}  // namespace

json MatrixToJson(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(Number(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json VectorToJson(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(Number(v[i]));
  return out;
}

json ExplanationToJson(const ExplanationDocument& doc) {
  const LPSolution& sol = doc.solution;
  const ActiveSet& a = doc.active;
  json out;
  out["schema_version"] = doc.schema_version;
  out["timestamp"] = doc.timestamp;

  json mvs = json::array();
  for (std::size_t i = 0; i < doc.mvs.size(); ++i) {
    mvs.push_back({{"id", doc.mvs[i].id},
                   {"index", i},
                   {"in_service", doc.mvs[i].in_service},
                   {"status", StatusName(sol.mv_status[i])},
                   {"basic", static_cast<bool>(sol.mv_basic[i])},
                   {"delta", Number(sol.delta_mv[i])},
                   {"mu", Number(sol.mu[i])}});
  }
  out["mvs"] = std::move(mvs);
  json cvs = json::array();
  for (std::size_t j = 0; j < doc.cvs.size(); ++j) {
    const bool given_up = sol.cv_status[j] == ConstraintStatus::kGivenUpLower ||
                          sol.cv_status[j] == ConstraintStatus::kGivenUpUpper;
    cvs.push_back({{"id", doc.cvs[j].id},
                   {"index", j},
                   {"status", StatusName(sol.cv_status[j])},
                   {"basic", static_cast<bool>(sol.cv_basic[j])},
                   {"given_up", given_up},
                   {"lambda", Number(sol.lambda[j])}});
  }
  out["cvs"] = std::move(cvs);

  out["solution"] = {{"objective", Number(sol.objective)},
                     {"iterations", sol.iterations},
                     {"degenerate", sol.degenerate},
                     {"dual_degenerate", sol.dual_degenerate},
                     {"delta_mv", VectorToJson(sol.delta_mv)},
                     {"lambda", VectorToJson(sol.lambda)},
                     {"mu", VectorToJson(sol.mu)},
                     {"infeasible_cvs", Ids(doc.cvs, sol.infeasible_cvs)}};
  out["kkt"] = {{"stationarity_max", Number(doc.kkt.stationarity_max)},
                {"complementarity_max", Number(doc.kkt.complementarity_max)},
                {"primal_max", Number(doc.kkt.primal_max)},
                {"dual_sign_max", Number(doc.kkt.dual_sign_max)},
                {"tolerance", Number(doc.kkt.tolerance)},
                {"passed", doc.kkt.passed}};

  json sides = json::array();
  for (bool upper : a.cv_at_upper) sides.push_back(upper ? "HI" : "LO");
  out["active_set"] = {{"k", a.k()},
                       {"mv_u", Ids(doc.mvs, a.mv_u)},
                       {"mv_c", Ids(doc.mvs, a.mv_c)},
                       {"mv_oos", Ids(doc.mvs, a.mv_oos)},
                       {"cv_c", Ids(doc.cvs, a.cv_c)},
                       {"cv_u", Ids(doc.cvs, a.cv_u)},
                       {"cv_sides", std::move(sides)},
                       {"g_a", MatrixToJson(a.g_a)},
                       {"g_a_inv", MatrixToJson(a.g_a_inv)},
                       {"c_u", VectorToJson(a.c_u)},
                       {"lambda", VectorToJson(doc.lambda_analytic)},
                       {"cond_estimate", Number(a.cond_estimate)},
                       {"ill_conditioned", a.ill_conditioned}};

  json anomalous = json::array();
  for (Index j = 0; j < a.k(); ++j) {
    if (doc.matrices.anomalous[j]) anomalous.push_back(doc.cvs[a.cv_c[j]].id);
  }
  out["attribution"] = {{"eps_lambda", doc.matrices.eps_lambda},
                        {"sign", VectorToJson(doc.matrices.sign)},
                        {"w", MatrixToJson(doc.matrices.w)},
                        {"w_corr", MatrixToJson(doc.matrices.w_corr)},
                        {"pi", MatrixToJson(doc.matrices.pi)},
                        {"p", MatrixToJson(doc.penalty)},
                        {"anomalous_columns", std::move(anomalous)}};

  json pairs = json::array();
  for (const ExplainedPair& p : doc.pairs) {
    pairs.push_back({{"mv", p.mv_id},
                     {"cv", p.cv_id},
                     {"side", SideName(p.side)},
                     {"label", p.cv_id + "-" + std::string(SideName(p.side))},
                     {"penalty", Number(p.penalty)},
                     {"local_best", p.local_best},
                     {"forbidden", p.forbidden}});
  }
  json x = json::array();
  for (Index r = 0; r < doc.assignment.assignment.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < doc.assignment.assignment.cols(); ++c) {
      row.push_back(doc.assignment.assignment(r, c));
    }
    x.push_back(std::move(row));
  }
  out["assignment"] = {{"pairs", std::move(pairs)},
                       {"total_penalty", Number(doc.assignment.total_penalty)},
                       {"matrix", std::move(x)},
                       {"forbidden_used", doc.assignment.forbidden_used}};
  if (doc.delta_p) {
    out["delta_p"] = {{"factorized", doc.delta_p->factorized},
                      {"direct", doc.delta_p->direct},
                      {"p_diag", doc.delta_p->p_diag},
                      {"p_off", doc.delta_p->p_off},
                      {"shared_mv", doc.mvs[a.mv_u[doc.delta_p->shared_row]].id}};
  } else {
    out["delta_p"] = nullptr;
  }
  out["warnings"] = doc.warnings;
  return out;
}

std::string RenderExplanationTable(const ExplanationDocument& doc) {
  const LPSolution& sol = doc.solution;
  std::ostringstream out;
  out << "Explanation " << doc.timestamp << "\n";
  out << "objective " << Fixed(sol.objective, 4) << "   k = " << doc.active.k()
      << "   iterations " << sol.iterations << "\n\n";

  out << "Pairings\n";
  if (doc.pairs.empty()) out << "  (none: no unconstrained MV remains)\n";
  for (const ExplainedPair& p : doc.pairs) {
    out << "  " << p.mv_id << " → " << p.cv_id << " (" << SideName(p.side) << ")"
        << "   penalty " << Fixed(p.penalty, 4);
    if (p.local_best) out << "   local best";
    if (p.forbidden) out << "   structurally zero";
    out << "\n";
  }
  out << "  total penalty " << Fixed(doc.assignment.total_penalty, 4) << "\n\n";

  out << "MVs\n";
  for (std::size_t i = 0; i < doc.mvs.size(); ++i) {
    out << "  " << Pad(doc.mvs[i].id, 8) << Pad(std::string(StatusName(sol.mv_status[i])), 14)
        << "dMV " << PadLeft(Fixed(sol.delta_mv[i], 4), 12) << "   mu "
        << PadLeft(Fixed(sol.mu[i], 4), 12) << "\n";
  }
  out << "\nShadow prices λ\n";
  for (std::size_t j = 0; j < doc.cvs.size(); ++j) {
    out << "  " << Pad(doc.cvs[j].id, 8) << Pad(std::string(StatusName(sol.cv_status[j])), 14)
        << PadLeft(Fixed(sol.lambda[j], 4), 12) << "\n";
  }
  out << "\n";
  if (doc.active.k() > 0) {
    RenderMatrix(out, "Π", doc, doc.matrices.pi, 4);
    RenderMatrix(out, "P", doc, doc.penalty, 4);
  }
  if (doc.delta_p) {
    out << "ΔP = P_diag - P_off = " << Fixed(doc.delta_p->p_diag, 4) << " - ("
        << Fixed(doc.delta_p->p_off, 4) << ") = " << Fixed(doc.delta_p->factorized, 4)
        << "\n\n";
  }
  for (const std::string& w : doc.warnings) out << "warning: " << w << "\n";
  return out.str();
}

std::vector<std::string> CheckExplanationJson(const json& doc) {
  std::vector<std::string> problems;
  auto need = [&](const json& obj, const std::string& path, const char* key,
                  json::value_t type) -> const json* {
    if (!obj.is_object() || !obj.contains(key)) {
      problems.push_back(path + "/" + key + ": missing");
      return nullptr;
    }
    const json& v = obj.at(key);
    const bool ok = type == json::value_t::number_float ? v.is_number()
                    : type == json::value_t::number_unsigned ? v.is_number_integer()
                                                              : v.type() == type;
    if (!ok) {
      problems.push_back(path + "/" + key + ": wrong type");
      return nullptr;
    }
    return &v;
  };
  using T = json::value_t;
  auto number_or_null = [&](const json& v, const std::string& path) {
    if (!v.is_number() && !v.is_null()) problems.push_back(path + ": expected number or null");
  };
  auto matrix = [&](const json& obj, const std::string& path, const char* key, std::size_t k) {
    const json* m = need(obj, path, key, T::array);
    if (!m) return;
    if (m->size() != k) problems.push_back(path + "/" + key + ": expected " + std::to_string(k) + " rows");
    for (std::size_t r = 0; r < m->size(); ++r) {
      const json& row = (*m)[r];
      if (!row.is_array() || row.size() != k) {
        problems.push_back(path + "/" + key + "/" + std::to_string(r) + ": ragged row");
        continue;
      }
      for (std::size_t c = 0; c < k; ++c) {
        number_or_null(row[c], path + "/" + key + "/" + std::to_string(r) + "/" + std::to_string(c));
      }
    }
  };

  if (!doc.is_object()) return {"/: expected object"};
  if (const json* v = need(doc, "", "schema_version", T::string); v && *v != kExplanationSchema) {
    problems.push_back("/schema_version: unsupported " + v->get<std::string>());
  }
  need(doc, "", "timestamp", T::string);
  need(doc, "", "warnings", T::array);
  const json* mvs = need(doc, "", "mvs", T::array);
  const json* cvs = need(doc, "", "cvs", T::array);
  if (mvs) {
    for (std::size_t i = 0; i < mvs->size(); ++i) {
      const std::string p = "/mvs/" + std::to_string(i);
      need((*mvs)[i], p, "id", T::string);
      need((*mvs)[i], p, "status", T::string);
      need((*mvs)[i], p, "in_service", T::boolean);
      need((*mvs)[i], p, "basic", T::boolean);
      if ((*mvs)[i].contains("delta")) number_or_null((*mvs)[i]["delta"], p + "/delta");
    }
  }
  if (cvs) {
    for (std::size_t j = 0; j < cvs->size(); ++j) {
      const std::string p = "/cvs/" + std::to_string(j);
      need((*cvs)[j], p, "id", T::string);
      need((*cvs)[j], p, "status", T::string);
      need((*cvs)[j], p, "given_up", T::boolean);
      need((*cvs)[j], p, "basic", T::boolean);
    }
  }
  if (const json* s = need(doc, "", "solution", T::object)) {
    need(*s, "/solution", "objective", T::number_float);
    need(*s, "/solution", "iterations", T::number_unsigned);
    need(*s, "/solution", "degenerate", T::boolean);
    need(*s, "/solution", "dual_degenerate", T::boolean);
    for (const char* key : {"delta_mv", "mu"}) {
      const json* v = need(*s, "/solution", key, T::array);
      if (v && mvs && v->size() != mvs->size()) problems.push_back(std::string("/solution/") + key + ": length");
    }
    const json* l = need(*s, "/solution", "lambda", T::array);
    if (l && cvs && l->size() != cvs->size()) problems.push_back("/solution/lambda: length");
    need(*s, "/solution", "infeasible_cvs", T::array);
  }
  if (const json* k = need(doc, "", "kkt", T::object)) {
    need(*k, "/kkt", "passed", T::boolean);
    need(*k, "/kkt", "stationarity_max", T::number_float);
  }
  std::size_t k = 0;
  if (const json* a = need(doc, "", "active_set", T::object)) {
    if (const json* kv = need(*a, "/active_set", "k", T::number_unsigned)) k = kv->get<std::size_t>();
    for (const char* key : {"mv_u", "cv_c", "cv_sides", "c_u", "lambda"}) {
      const json* v = need(*a, "/active_set", key, T::array);
      if (v && v->size() != k) problems.push_back(std::string("/active_set/") + key + ": length");
    }
    for (const char* key : {"mv_c", "mv_oos", "cv_u"}) need(*a, "/active_set", key, T::array);
    matrix(*a, "/active_set", "g_a", k);
    matrix(*a, "/active_set", "g_a_inv", k);
    need(*a, "/active_set", "ill_conditioned", T::boolean);
  }
  if (const json* at = need(doc, "", "attribution", T::object)) {
    for (const char* key : {"w", "w_corr", "pi", "p"}) matrix(*at, "/attribution", key, k);
    need(*at, "/attribution", "sign", T::array);
    need(*at, "/attribution", "anomalous_columns", T::array);
  }
  if (const json* as = need(doc, "", "assignment", T::object)) {
    if (const json* pairs = need(*as, "/assignment", "pairs", T::array)) {
      if (pairs->size() != k) problems.push_back("/assignment/pairs: expected one pair per unconstrained MV");
      for (std::size_t i = 0; i < pairs->size(); ++i) {
        const std::string p = "/assignment/pairs/" + std::to_string(i);
        need((*pairs)[i], p, "mv", T::string);
        need((*pairs)[i], p, "cv", T::string);
        if (const json* side = need((*pairs)[i], p, "side", T::string);
            side && *side != "HI" && *side != "LO") {
          problems.push_back(p + "/side: expected HI or LO");
        }
        need((*pairs)[i], p, "local_best", T::boolean);
        need((*pairs)[i], p, "forbidden", T::boolean);
        if ((*pairs)[i].contains("penalty")) number_or_null((*pairs)[i]["penalty"], p + "/penalty");
      }
    }
    need(*as, "/assignment", "forbidden_used", T::boolean);
    if (as->contains("total_penalty")) number_or_null((*as)["total_penalty"], "/assignment/total_penalty");
    else problems.push_back("/assignment/total_penalty: missing");
    matrix(*as, "/assignment", "matrix", k);
  }
  if (!doc.contains("delta_p")) {
    problems.push_back("/delta_p: missing");
  } else if (!doc["delta_p"].is_null()) {
    for (const char* key : {"factorized", "direct", "p_diag", "p_off"}) {
      need(doc["delta_p"], "/delta_p", key, T::number_float);
    }
  }
  return problems;
}

}  // namespace lpx
