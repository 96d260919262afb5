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
#include <fstream>
#include <set>
#include <sstream>

#include "lpx/history.hpp"

namespace lpx {

using nlohmann::json;

namespace {

using Int = __int128;

// round(num / den) with ties to even; num, den >= 0.
Int RoundHalfEven(Int num, Int den) {
  Int q = num / den;
  const Int twice_rem = 2 * (num % den);
  if (twice_rem > den || (twice_rem == den && q % 2 == 1)) ++q;
  return q;
}

std::string Digits(Int v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

// Fixed-point text of q / 10^decimals.
std::string FixedPoint(Int q, int decimals) {
  std::string s = Digits(q);
  if (decimals == 0) return s;
  if (static_cast<int>(s.size()) <= decimals) s.insert(0, decimals + 1 - s.size(), '0');
  s.insert(s.size() - decimals, ".");
  return s;
}

std::vector<LabelShare> Ranked(const std::map<std::string, std::int64_t>& counts,
                               std::int64_t total) {
  std::vector<LabelShare> out;
  for (const auto& [label, count] : counts) {
    out.push_back({label, count, 100.0 * static_cast<double>(count) / static_cast<double>(total),
                   FormatShare(count, total)});
  }
  std::stable_sort(out.begin(), out.end(), [](const LabelShare& a, const LabelShare& b) {
    return a.count != b.count ? a.count > b.count : a.label < b.label;
  });
  return out;
}

json ShareToJson(const LabelShare& s) {
  return {{"label", s.label}, {"count", s.count}, {"percent", s.percent}, {"display", s.display}};
}

json MarkToJson(const LiveMark& m) {
  return {{"label", m.label}, {"color", ColorName(m.color)}, {"reason", m.reason}};
}

std::string Cell(const LabelShare& s, const std::optional<LiveMark>& live) {
  std::string out = s.label + " (" + s.display + ")";
  if (live && live->label == s.label) out += " [" + std::string(ColorName(live->color)) + "]";
  return out;
}

std::string JoinRest(const MvRow& row) {
  std::string out;
  for (const LabelShare& s : row.rest) {
    if (!out.empty()) out += ", ";
    out += Cell(s, row.live);
  }
  return out;
}

std::string CsvQuote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string FormatShare(std::int64_t count, std::int64_t total) {
  if (total <= 0 || count <= 0) return "0.0%";
  const Int tenths = RoundHalfEven(static_cast<Int>(count) * 1000, total);
  if (tenths > 0) return FixedPoint(tenths, 1) + "%";
  Int scale = 1000;
  for (int decimals = 2; decimals < 40; ++decimals) {
    scale *= 10;
    const Int q = RoundHalfEven(static_cast<Int>(count) * scale, total);
    if (q > 0) return FixedPoint(q, decimals) + "%";
  }
  return "0.0%";
}

std::string_view ColorName(Color color) {
  switch (color) {
    case Color::kGreen: return "GREEN";
    case Color::kYellow: return "YELLOW";
    case Color::kRed: return "RED";
  }
  return "YELLOW";
}

void HistoryAggregator::Add(const HistoryRun& ids, const IntervalRecord& record) {
  if (intervals_ == 0) {
    mv_ids_ = ids.mv_ids;
    cv_ids_ = ids.cv_ids;
    mv_counts_.assign(mv_ids_.size(), {});
    cv_given_up_.assign(cv_ids_.size(), 0);
    cv_holders_.assign(cv_ids_.size(), {});
    start_ = record.timestamp;
  } else if (ids.mv_ids != mv_ids_ || ids.cv_ids != cv_ids_) {
    throw Error(ErrorCode::kIdMismatch, "history", "variable ids changed between intervals");
  }
  end_ = record.timestamp;
  ++intervals_;
  failed_ += record.failed ? 1 : 0;
  degenerate_ += record.degenerate ? 1 : 0;
  for (std::size_t i = 0; i < record.mv_labels.size(); ++i) {
    const MvLabel& label = record.mv_labels[i];
    ++mv_counts_[i][label.Text()];
    if (label.kind == LabelKind::kPaired) {
      const auto it = std::find(cv_ids_.begin(), cv_ids_.end(), label.cv);
      if (it == cv_ids_.end()) {
        throw Error(ErrorCode::kUnknownLabel, "history", "label names unknown CV " + label.cv);
      }
      ++cv_holders_[it - cv_ids_.begin()][mv_ids_[i]];
    }
  }
  for (std::size_t j = 0; j < record.cv_infeasible.size(); ++j) {
    cv_given_up_[j] += record.cv_infeasible[j] ? 1 : 0;
  }
}

HistoryReport HistoryAggregator::Finish(int columns) const {
  if (intervals_ == 0) {
    throw Error(ErrorCode::kEmptyHistory, "history", "no intervals to aggregate");
  }
  if (columns < 1) {
    throw Error(ErrorCode::kInvalidArgument, "history", "columns must be at least 1");
  }
  HistoryReport report;
  report.start = start_;
  report.end = end_;
  report.intervals = intervals_;
  report.failed = failed_;
  report.degenerate = degenerate_;
  report.columns = columns;
  report.cv_ids = cv_ids_;
  for (std::size_t i = 0; i < mv_ids_.size(); ++i) {
    MvRow row;
    row.mv = mv_ids_[i];
    std::vector<LabelShare> ranked = Ranked(mv_counts_[i], intervals_);
    const std::size_t top = std::min<std::size_t>(columns, ranked.size());
    row.top.assign(ranked.begin(), ranked.begin() + top);
    row.rest.assign(ranked.begin() + top, ranked.end());
    report.rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < cv_ids_.size(); ++j) {
    if (cv_given_up_[j] == 0) continue;
    InfeasibleCv cv;
    cv.cv = cv_ids_[j];
    cv.count = cv_given_up_[j];
    cv.percent = 100.0 * static_cast<double>(cv.count) / static_cast<double>(intervals_);
    cv.display = FormatShare(cv.count, intervals_);
    cv.paired_mvs = Ranked(cv_holders_[j], intervals_);
    report.infeasible.push_back(std::move(cv));
  }
  std::stable_sort(report.infeasible.begin(), report.infeasible.end(),
                   [](const InfeasibleCv& a, const InfeasibleCv& b) { return a.count > b.count; });
  return report;
}

HistoryReport Aggregate(const HistoryRun& run, int columns) {
  HistoryAggregator agg;
  for (const IntervalRecord& r : run.records) agg.Add(run, r);
  return agg.Finish(columns);
}

std::vector<IntentEntry> ParseIntent(const json& doc) {
  const json& list = doc.is_object() && doc.contains("pairings") ? doc["pairings"] : doc;
  if (!list.is_array()) {
    throw Error(ErrorCode::kParseError, "intent", "intent must be a JSON list of {mv, cv, side}");
  }
  std::vector<IntentEntry> out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const json& e = list[k];
    const std::string where = "intent entry " + std::to_string(k);
    if (!e.is_object() || !e.contains("mv") || !e.contains("cv") || !e["mv"].is_string() ||
        !e["cv"].is_string()) {
      throw Error(ErrorCode::kParseError, "intent", where + ": needs string mv and cv");
    }
    IntentEntry entry{e["mv"].get<std::string>(), e["cv"].get<std::string>(), Side::kLo};
    const std::string side = e.value("side", "");
    if (side == "HI") {
      entry.side = Side::kHi;
    } else if (side != "LO") {
      throw Error(ErrorCode::kParseError, "intent", where + ": side must be HI or LO");
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<IntentEntry> LoadIntent(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "intent", "cannot open " + path);
  try {
    return ParseIntent(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, "intent", path + ": " + e.what());
  }
}

void OverlayLive(HistoryReport& report, const ExplanationDocument& live,
                 const std::optional<std::vector<IntentEntry>>& intent) {
  std::vector<std::string> live_mvs, live_cvs;
  for (const auto& mv : live.mvs) live_mvs.push_back(mv.id);
  for (const auto& cv : live.cvs) live_cvs.push_back(cv.id);
  std::vector<std::string> report_mvs;
  for (const MvRow& row : report.rows) report_mvs.push_back(row.mv);
  if (std::set<std::string>(live_mvs.begin(), live_mvs.end()) !=
          std::set<std::string>(report_mvs.begin(), report_mvs.end()) ||
      std::set<std::string>(live_cvs.begin(), live_cvs.end()) !=
          std::set<std::string>(report.cv_ids.begin(), report.cv_ids.end())) {
    throw Error(ErrorCode::kIdMismatch, "overlay", "live snapshot ids differ from the history");
  }
  if (intent) {
    for (const IntentEntry& e : *intent) {
      if (std::find(live_mvs.begin(), live_mvs.end(), e.mv) == live_mvs.end() ||
          std::find(live_cvs.begin(), live_cvs.end(), e.cv) == live_cvs.end()) {
        throw Error(ErrorCode::kIdMismatch, "overlay",
                    "intent pairing " + e.mv + "/" + e.cv + " names an unknown variable");
      }
    }
  }

  const IntervalRecord record = MakeRecord(live);
  Overlay overlay;
  overlay.timestamp = live.timestamp;
  overlay.intent_configured = intent.has_value();
  for (std::size_t i = 0; i < live.mvs.size(); ++i) {
    const MvLabel& label = record.mv_labels[i];
    LiveMark mark{label.Text(), Color::kYellow, ""};
    switch (label.kind) {
      case LabelKind::kPaired: {
        const bool intended =
            intent && std::any_of(intent->begin(), intent->end(), [&](const IntentEntry& e) {
              return e.mv == live.mvs[i].id && e.cv == label.cv && e.side == label.side;
            });
        if (intended) {
          mark.color = Color::kGreen;
          mark.reason = "matches design intent";
        } else {
          mark.reason = intent ? "pairing absent from design intent" : "no intent configured";
        }
        break;
      }
      case LabelKind::kClampedLo:
      case LabelKind::kClampedHi: mark.reason = "MV clamped at a limit"; break;
      case LabelKind::kOos: mark.reason = "MV out of service"; break;
      case LabelKind::kUnpaired: mark.reason = "free MV holds no CV"; break;
      case LabelKind::kFailed: mark.reason = "pipeline failed"; break;
    }
    overlay.mvs.emplace_back(live.mvs[i].id, mark);
    for (MvRow& row : report.rows) {
      if (row.mv == live.mvs[i].id) row.live = mark;
    }
  }
  for (int j : live.solution.infeasible_cvs) {
    LiveMark mark{live.cvs[j].id, Color::kRed, "CV given up"};
    overlay.cvs.emplace_back(live.cvs[j].id, mark);
    bool listed = false;
    for (InfeasibleCv& cv : report.infeasible) {
      if (cv.cv == live.cvs[j].id) {
        cv.live = mark;
        listed = true;
      }
    }
    if (!listed) {
      InfeasibleCv cv;
      cv.cv = live.cvs[j].id;
      cv.display = FormatShare(0, report.intervals);
      cv.live = mark;
      report.infeasible.push_back(std::move(cv));
    }
  }
  report.overlay = std::move(overlay);
}

json HistoryReportToJson(const HistoryReport& report) {
  json rows = json::array();
  for (const MvRow& row : report.rows) {
    json top = json::array(), rest = json::array();
    for (const LabelShare& s : row.top) top.push_back(ShareToJson(s));
    for (const LabelShare& s : row.rest) rest.push_back(ShareToJson(s));
    json r = {{"mv", row.mv}, {"s", std::move(top)}, {"s_inf", std::move(rest)}};
    r["live"] = row.live ? MarkToJson(*row.live) : json(nullptr);
    rows.push_back(std::move(r));
  }
  json infeasible = json::array();
  for (const InfeasibleCv& cv : report.infeasible) {
    json paired = json::array();
    for (const LabelShare& s : cv.paired_mvs) paired.push_back(ShareToJson(s));
    json c = {{"cv", cv.cv},
              {"count", cv.count},
              {"percent", cv.percent},
              {"display", cv.display},
              {"paired_mvs", std::move(paired)}};
    c["live"] = cv.live ? MarkToJson(*cv.live) : json(nullptr);
    infeasible.push_back(std::move(c));
  }
  json out = {{"schema_version", "lpx.history/1"},
              {"explanation_schema", kExplanationSchema},
              {"window", {{"start", report.start}, {"end", report.end}, {"intervals", report.intervals}}},
              {"failed_intervals", report.failed},
              {"degenerate_intervals", report.degenerate},
              {"columns", report.columns},
              {"rows", std::move(rows)},
              {"infeasible", std::move(infeasible)}};
  if (report.overlay) {
    json mvs = json::array(), cvs = json::array();
    for (const auto& [id, mark] : report.overlay->mvs) {
      json m = MarkToJson(mark);
      m["mv"] = id;
      mvs.push_back(std::move(m));
    }
    for (const auto& [id, mark] : report.overlay->cvs) {
      json m = MarkToJson(mark);
      m["cv"] = id;
      cvs.push_back(std::move(m));
    }
    out["overlay"] = {{"timestamp", report.overlay->timestamp},
                      {"intent_configured", report.overlay->intent_configured},
                      {"mvs", std::move(mvs)},
                      {"cvs", std::move(cvs)}};
    out["intent_configured"] = report.overlay->intent_configured;
  } else {
    out["overlay"] = nullptr;
  }
  return out;
}

std::string RenderHistoryMarkdown(const HistoryReport& report) {
  std::ostringstream out;
  out << "Pairings " << report.start << " to " << report.end << " (" << report.intervals
      << " intervals";
  if (report.failed) out << ", " << report.failed << " failed";
  out << ")\n\n| MV |";
  for (int c = 1; c <= report.columns; ++c) out << " S" << c << " |";
  out << " S∞ |\n|---|";
  for (int c = 0; c <= report.columns; ++c) out << "---|";
  out << "\n";
  for (const MvRow& row : report.rows) {
    out << "| " << row.mv;
    if (row.live && std::none_of(row.top.begin(), row.top.end(),
                                 [&](const LabelShare& s) { return s.label == row.live->label; }) &&
        std::none_of(row.rest.begin(), row.rest.end(),
                     [&](const LabelShare& s) { return s.label == row.live->label; })) {
      out << " (live " << row.live->label << " [" << ColorName(row.live->color) << "])";
    }
    out << " |";
    for (int c = 0; c < report.columns; ++c) {
      out << " ";
      if (c < static_cast<int>(row.top.size())) out << Cell(row.top[c], row.live);
      out << " |";
    }
    out << " " << JoinRest(row) << " |\n";
  }
  if (!report.infeasible.empty()) {
    // One CV per S column, the remainder in the S-infinity cell.
    auto cell = [](const InfeasibleCv& cv) {
      return cv.cv + " (" + cv.display + ")" + (cv.live ? " [RED]" : "");
    };
    out << "| Infeasible |";
    for (int c = 0; c < report.columns; ++c) {
      out << " ";
      if (c < static_cast<int>(report.infeasible.size())) out << cell(report.infeasible[c]);
      out << " |";
    }
    std::string rest;
    for (std::size_t k = report.columns; k < report.infeasible.size(); ++k) {
      rest += (rest.empty() ? "" : ", ") + cell(report.infeasible[k]);
    }
    out << " " << rest << " |\n";
  }
  if (report.overlay && !report.overlay->intent_configured) {
    out << "\nno intent configured: live pairings are not classified\n";
  }
  return out.str();
}

std::string RenderHistoryCsv(const HistoryReport& report) {
  std::ostringstream out;
  out << "MV";
  for (int c = 1; c <= report.columns; ++c) out << ",S" << c;
  out << ",S_inf\n";
  for (const MvRow& row : report.rows) {
    out << CsvQuote(row.mv);
    for (int c = 0; c < report.columns; ++c) {
      out << ",";
      if (c < static_cast<int>(row.top.size())) out << CsvQuote(Cell(row.top[c], row.live));
    }
    out << "," << CsvQuote(JoinRest(row)) << "\n";
  }
  if (!report.infeasible.empty()) {
    out << "Infeasible";
    std::string all;
    for (std::size_t k = 0; k < report.infeasible.size(); ++k) {
      const InfeasibleCv& cv = report.infeasible[k];
      const std::string cell = cv.cv + " (" + cv.display + ")" + (cv.live ? " [RED]" : "");
      if (static_cast<int>(k) < report.columns) {
        out << "," << CsvQuote(cell);
      } else {
        all += (all.empty() ? "" : ", ") + cell;
      }
    }
    for (int c = static_cast<int>(report.infeasible.size()); c < report.columns; ++c) out << ",";
    out << "," << CsvQuote(all) << "\n";
  }
  return out.str();
}

}  // namespace lpx
