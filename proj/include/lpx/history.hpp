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

// Historical pairing statistics: the explain pipeline over a time-ordered
// snapshot stream, reduced to per-MV ranked label occupancy.

#ifndef LPX_HISTORY_HPP_
#define LPX_HISTORY_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lpx/explain.hpp"

namespace lpx {

// Per-MV state in one interval.
enum class LabelKind {
  kPaired,     // "CV2-HI"
  kClampedLo,  // "MV-LO"
  kClampedHi,  // "MV-HI"
  kOos,        // "OOS"
  kUnpaired,   // "UNPAIRED": free MV left off the basis
  kFailed,     // "FAILED": the interval's pipeline raised
};

struct MvLabel {
  LabelKind kind = LabelKind::kFailed;
  std::string cv;  // paired CV id
  Side side = Side::kLo;

  std::string Text() const;
  bool operator==(const MvLabel&) const = default;
};

// Parses a label text back. Throws Error(kUnknownLabel).
MvLabel ParseLabel(const std::string& text);

struct IntervalRecord {
  std::string timestamp;
  std::vector<MvLabel> mv_labels;  // snapshot MV order
  std::vector<bool> cv_infeasible;  // snapshot CV order
  bool degenerate = false;
  bool ill_conditioned = false;
  bool failed = false;
  std::string error;
};

IntervalRecord MakeRecord(const ExplanationDocument& doc);
IntervalRecord FailedRecord(const ControllerSnapshot& snapshot, const Error& error);
IntervalRecord RecordFor(const ControllerSnapshot& snapshot);

// Seconds since 1970-01-01T00:00:00Z. Accepts YYYY-MM-DD[THH:MM[:SS[.f]]]
// with an optional Z or +-HH:MM offset. Throws Error(kParseError).
double ParseTimestamp(const std::string& text);

struct HistoryOptions {
  int jobs = 0;  // 0: hardware concurrency
  int batch = 256;
};

struct HistoryRun {
  std::vector<std::string> mv_ids;
  std::vector<std::string> cv_ids;
  std::vector<IntervalRecord> records;
};

// Streams JSON-Lines snapshots in order. Throws Error(kOutOfOrderTimestamp)
// on a timestamp earlier than its predecessor, Error(kIdMismatch) when the
// variable ids change mid-stream, and the validation error (with its line
// number) for a malformed line. Pipeline failures become FAILED records.
void StreamHistory(std::istream& jsonl, const HistoryOptions& options,
                   const std::function<void(const HistoryRun& ids, IntervalRecord&&)>& sink);
HistoryRun RunHistory(std::istream& jsonl, const HistoryOptions& options = {});
HistoryRun RunHistory(const std::vector<ControllerSnapshot>& snapshots);

struct LabelShare {
  std::string label;
  std::int64_t count = 0;
  double percent = 0.0;  // exact count / N x 100
  std::string display;   // "99.4%"
};

enum class Color { kGreen, kYellow, kRed };
std::string_view ColorName(Color color);

struct LiveMark {
  std::string label;
  Color color = Color::kYellow;
  std::string reason;
};

struct MvRow {
  std::string mv;
  std::vector<LabelShare> top;   // S1..S_columns
  std::vector<LabelShare> rest;  // S_inf
  std::optional<LiveMark> live;
};

struct InfeasibleCv {
  std::string cv;
  std::int64_t count = 0;
  double percent = 0.0;
  std::string display;
  std::vector<LabelShare> paired_mvs;  // who held it when it was feasible
  std::optional<LiveMark> live;
};

struct Overlay {
  std::string timestamp;
  bool intent_configured = false;
  std::vector<std::pair<std::string, LiveMark>> mvs;
  std::vector<std::pair<std::string, LiveMark>> cvs;  // given-up CVs, RED
};

struct HistoryReport {
  std::string start;
  std::string end;
  std::int64_t intervals = 0;
  std::int64_t failed = 0;
  std::int64_t degenerate = 0;
  int columns = 3;
  std::vector<std::string> cv_ids;
  std::vector<MvRow> rows;
  std::vector<InfeasibleCv> infeasible;
  std::optional<Overlay> overlay;
};

// Incremental reduction, fed in timestamp order.
class HistoryAggregator {
 public:
  void Add(const HistoryRun& ids, const IntervalRecord& record);
  // Throws Error(kEmptyHistory) when nothing was added.
  HistoryReport Finish(int columns = 3) const;

 private:
  std::vector<std::string> mv_ids_;
  std::vector<std::string> cv_ids_;
  std::vector<std::map<std::string, std::int64_t>> mv_counts_;
  std::vector<std::int64_t> cv_given_up_;
  std::vector<std::map<std::string, std::int64_t>> cv_holders_;
  std::string start_;
  std::string end_;
  std::int64_t intervals_ = 0;
  std::int64_t failed_ = 0;
  std::int64_t degenerate_ = 0;
};

HistoryReport Aggregate(const HistoryRun& run, int columns = 3);

// Occupancy display: round-half-even to 0.1%; smaller nonzero shares get
// the first significant digit ("0.001%").
std::string FormatShare(std::int64_t count, std::int64_t total);

struct IntentEntry {
  std::string mv;
  std::string cv;
  Side side = Side::kLo;
};

// JSON list of {"mv", "cv", "side"}.
std::vector<IntentEntry> ParseIntent(const nlohmann::json& doc);
std::vector<IntentEntry> LoadIntent(const std::string& path);

// Annotates the report with the live pairings. Throws Error(kIdMismatch)
// when the live document or the intent list names variables the report
// does not know.
void OverlayLive(HistoryReport& report, const ExplanationDocument& live,
                 const std::optional<std::vector<IntentEntry>>& intent);

nlohmann::json HistoryReportToJson(const HistoryReport& report);
std::string RenderHistoryMarkdown(const HistoryReport& report);
std::string RenderHistoryCsv(const HistoryReport& report);

}  // namespace lpx

#endif  // LPX_HISTORY_HPP_
