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

#include "lpx/history.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <istream>
#include <thread>

namespace lpx {
namespace {

std::vector<std::string> MvIds(const ControllerSnapshot& s) {
  std::vector<std::string> out;
  for (const auto& mv : s.mvs) out.push_back(mv.id);
  return out;
}

std::vector<std::string> CvIds(const ControllerSnapshot& s) {
  std::vector<std::string> out;
  for (const auto& cv : s.cvs) out.push_back(cv.id);
  return out;
}

// Days since 1970-01-01 of a proleptic Gregorian date.
std::int64_t DaysFromCivil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Slot {
  std::optional<ControllerSnapshot> snapshot;
  IntervalRecord record;
  std::optional<Error> error;
  std::size_t line = 0;
};

void Process(Slot& slot, const std::string& text) {
  try {
    slot.snapshot = ParseSnapshot(text);
    slot.record = RecordFor(*slot.snapshot);
  } catch (const Error& e) {
    slot.error = e;
  }
}

}  // namespace

std::string MvLabel::Text() const {
  switch (kind) {
    case LabelKind::kPaired: return cv + "-" + std::string(SideName(side));
    case LabelKind::kClampedLo: return "MV-LO";
    case LabelKind::kClampedHi: return "MV-HI";
    case LabelKind::kOos: return "OOS";
    case LabelKind::kUnpaired: return "UNPAIRED";
    case LabelKind::kFailed: return "FAILED";
  }
  return "FAILED";
}

MvLabel ParseLabel(const std::string& text) {
  if (text == "MV-LO") return {LabelKind::kClampedLo, {}, Side::kLo};
  if (text == "MV-HI") return {LabelKind::kClampedHi, {}, Side::kLo};
  if (text == "OOS") return {LabelKind::kOos, {}, Side::kLo};
  if (text == "UNPAIRED") return {LabelKind::kUnpaired, {}, Side::kLo};
  if (text == "FAILED") return {LabelKind::kFailed, {}, Side::kLo};
  if (text.size() > 3) {
    const std::string cv = text.substr(0, text.size() - 3);
    const std::string tail = text.substr(text.size() - 3);
    if (tail == "-HI") return {LabelKind::kPaired, cv, Side::kHi};
    if (tail == "-LO") return {LabelKind::kPaired, cv, Side::kLo};
  }
  throw Error(ErrorCode::kUnknownLabel, "history", "unknown label '" + text + "'");
}

IntervalRecord MakeRecord(const ExplanationDocument& doc) {
  IntervalRecord r;
  r.timestamp = doc.timestamp;
  r.degenerate = doc.solution.degenerate;
  r.ill_conditioned = doc.active.ill_conditioned;
  const std::size_t n = doc.mvs.size();
  r.mv_labels.assign(n, MvLabel{LabelKind::kUnpaired, {}, Side::kLo});
  for (std::size_t i = 0; i < n; ++i) {
    MvLabel& label = r.mv_labels[i];
    if (!doc.mvs[i].in_service) {
      label.kind = LabelKind::kOos;
      continue;
    }
    switch (doc.solution.mv_status[i]) {
      case ConstraintStatus::kAtLower: label.kind = LabelKind::kClampedLo; break;
      case ConstraintStatus::kAtUpper: label.kind = LabelKind::kClampedHi; break;
      case ConstraintStatus::kPinned:
        // Limits collapsed onto the current value: the side the cost pushes.
        label.kind = doc.solution.mu[i] >= 0.0 ? LabelKind::kClampedLo : LabelKind::kClampedHi;
        break;
      default: break;
    }
  }
  for (const ExplainedPair& p : doc.pairs) {
    r.mv_labels[p.mv] = {LabelKind::kPaired, p.cv_id, p.side};
  }
  r.cv_infeasible.assign(doc.cvs.size(), false);
  for (int j : doc.solution.infeasible_cvs) r.cv_infeasible[j] = true;
  return r;
}

IntervalRecord FailedRecord(const ControllerSnapshot& snapshot, const Error& error) {
  IntervalRecord r;
  r.timestamp = snapshot.timestamp;
  r.failed = true;
  r.error = error.Describe();
  for (const auto& mv : snapshot.mvs) {
    r.mv_labels.push_back({mv.in_service ? LabelKind::kFailed : LabelKind::kOos, {}, Side::kLo});
  }
  r.cv_infeasible.assign(snapshot.cvs.size(), false);
  return r;
}

IntervalRecord RecordFor(const ControllerSnapshot& snapshot) {
  try {
    return MakeRecord(Explain(snapshot));
  } catch (const Error& e) {
    return FailedRecord(snapshot, e);
  }
}

double ParseTimestamp(const std::string& text) {
  auto fail = [&]() -> double {
    throw Error(ErrorCode::kParseError, "history", "invalid ISO-8601 timestamp '" + text + "'");
  };
  std::size_t pos = 0;
  auto digits = [&](std::size_t count) -> int {
    if (pos + count > text.size()) fail();
    int v = 0;
    for (std::size_t k = 0; k < count; ++k) {
      const char c = text[pos + k];
      if (!std::isdigit(static_cast<unsigned char>(c))) fail();
      v = v * 10 + (c - '0');
    }
    pos += count;
    return v;
  };
  auto expect = [&](char c) {
    if (pos >= text.size() || text[pos] != c) fail();
    ++pos;
  };
  const int year = digits(4);
  expect('-');
  const int month = digits(2);
  expect('-');
  const int day = digits(2);
  if (month < 1 || month > 12 || day < 1 || day > 31) fail();
  int hour = 0, minute = 0;
  double second = 0.0;
  if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
    ++pos;
    hour = digits(2);
    expect(':');
    minute = digits(2);
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      second = digits(2);
      if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
        ++pos;
        double scale = 0.1;
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) fail();
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
          second += (text[pos++] - '0') * scale;
          scale /= 10;
        }
      }
    }
    if (hour > 23 || minute > 59 || second >= 61.0) fail();
  }
  int offset = 0;
  if (pos < text.size()) {
    if (text[pos] == 'Z') {
      ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
      const int sign = text[pos++] == '-' ? -1 : 1;
      const int oh = digits(2);
      if (pos < text.size() && text[pos] == ':') ++pos;
      const int om = digits(2);
      offset = sign * (oh * 3600 + om * 60);
    } else {
      fail();
    }
  }
  if (pos != text.size()) fail();
  const std::int64_t days = DaysFromCivil(year, month, day);
  return static_cast<double>(days * 86400 + hour * 3600 + minute * 60 - offset) + second;
}

void StreamHistory(std::istream& jsonl, const HistoryOptions& options,
                   const std::function<void(const HistoryRun&, IntervalRecord&&)>& sink) {
  int jobs = options.jobs > 0 ? options.jobs : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, jobs);
  const std::size_t batch = static_cast<std::size_t>(std::max(1, options.batch)) * jobs;
  HistoryRun ids;
  bool have_ids = false;
  double last_time = -kInf;
  std::string last_stamp;
  std::size_t line_no = 0;
  std::vector<std::string> lines;
  std::vector<Slot> slots;
  bool eof = false;
  while (!eof) {
    lines.clear();
    std::vector<std::size_t> numbers;
    std::string line;
    while (lines.size() < batch) {
      if (!std::getline(jsonl, line)) {
        eof = true;
        break;
      }
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      lines.push_back(std::move(line));
      numbers.push_back(line_no);
    }
    if (lines.empty()) break;
    slots.assign(lines.size(), Slot{});
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      for (std::size_t k = next++; k < lines.size(); k = next++) Process(slots[k], lines[k]);
    };
    const int threads = std::min<int>(jobs, static_cast<int>(lines.size()));
    if (threads <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    for (std::size_t k = 0; k < slots.size(); ++k) {
      Slot& slot = slots[k];
      const std::string where = "line " + std::to_string(numbers[k]);
      if (slot.error) {
        throw Error(slot.error->code(), slot.error->stage(), where + ": " + slot.error->what());
      }
      const ControllerSnapshot& snap = *slot.snapshot;
      if (!have_ids) {
        ids.mv_ids = MvIds(snap);
        ids.cv_ids = CvIds(snap);
        have_ids = true;
      } else if (MvIds(snap) != ids.mv_ids || CvIds(snap) != ids.cv_ids) {
        throw Error(ErrorCode::kIdMismatch, "history",
                    where + ": variable ids differ from the first snapshot");
      }
      const double t = ParseTimestamp(snap.timestamp);
      if (t < last_time) {
        throw Error(ErrorCode::kOutOfOrderTimestamp, "history",
                    where + ": " + snap.timestamp + " precedes " + last_stamp);
      }
      last_time = t;
      last_stamp = snap.timestamp;
      sink(ids, std::move(slot.record));
    }
  }
}

HistoryRun RunHistory(std::istream& jsonl, const HistoryOptions& options) {
  HistoryRun run;
  StreamHistory(jsonl, options, [&](const HistoryRun& ids, IntervalRecord&& r) {
    if (run.records.empty()) {
      run.mv_ids = ids.mv_ids;
      run.cv_ids = ids.cv_ids;
    }
    run.records.push_back(std::move(r));
  });
  return run;
}

HistoryRun RunHistory(const std::vector<ControllerSnapshot>& snapshots) {
  HistoryRun run;
  double last_time = -kInf;
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    const ControllerSnapshot& snap = snapshots[k];
    if (k == 0) {
      run.mv_ids = MvIds(snap);
      run.cv_ids = CvIds(snap);
    } else if (MvIds(snap) != run.mv_ids || CvIds(snap) != run.cv_ids) {
      throw Error(ErrorCode::kIdMismatch, "history",
                  "snapshot " + std::to_string(k) + ": variable ids differ");
    }
    const double t = ParseTimestamp(snap.timestamp);
    if (t < last_time) {
      throw Error(ErrorCode::kOutOfOrderTimestamp, "history",
                  "snapshot " + std::to_string(k) + ": " + snap.timestamp + " out of order");
    }
    last_time = t;
    run.records.push_back(RecordFor(snap));
  }
  return run;
}

}  // namespace lpx
