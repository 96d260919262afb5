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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "lpx/history.hpp"
#include "lpx/synthetic.hpp"

namespace lpx {
namespace {

using nlohmann::json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ControllerSnapshot Fixture() { return LoadSnapshot(LPX_FIXTURE_DIR "/sec32.json"); }

std::string Line(ControllerSnapshot s, const std::string& timestamp) {
  s.timestamp = timestamp;
  return SerializeSnapshot(s) + "\n";
}

ErrorCode CodeOf(const std::string& jsonl) {
  std::istringstream in(jsonl);
  try {
    Aggregate(RunHistory(in, {.jobs = 1}));
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

HistoryReport FixtureReport() {
  std::ifstream in(LPX_FIXTURE_DIR "/history3.jsonl");
  return Aggregate(RunHistory(in));
}

TEST(FormatShareTest, RoundsHalfEvenToTenths) {
  EXPECT_EQ(FormatShare(1, 3), "33.3%");
  EXPECT_EQ(FormatShare(2, 3), "66.7%");
  EXPECT_EQ(FormatShare(1, 8), "12.5%");
  EXPECT_EQ(FormatShare(1, 16), "6.2%");   // 6.25 -> even
  EXPECT_EQ(FormatShare(3, 16), "18.8%");  // 18.75 -> even
  EXPECT_EQ(FormatShare(3, 2000), "0.2%"); // 0.15 -> even
  EXPECT_EQ(FormatShare(994, 1000), "99.4%");
  EXPECT_EQ(FormatShare(5, 5), "100.0%");
  EXPECT_EQ(FormatShare(0, 5), "0.0%");
}

TEST(FormatShareTest, SmallSharesKeepOneSignificantDigit) {
  EXPECT_EQ(FormatShare(1, 1000), "0.1%");
  EXPECT_EQ(FormatShare(1, 2000), "0.05%");
  EXPECT_EQ(FormatShare(1, 4000), "0.02%");  // 0.025 -> even
  EXPECT_EQ(FormatShare(1, 288000), "0.0003%");
  EXPECT_EQ(FormatShare(1, 100000000), "0.000001%");
}

TEST(LabelTest, RoundTrip) {
  for (const std::string text : {"CV2-HI", "CV10-LO", "MV-LO", "MV-HI", "OOS", "UNPAIRED", "FAILED"}) {
    EXPECT_EQ(ParseLabel(text).Text(), text);
  }
  const MvLabel l = ParseLabel("CV2-HI");
  EXPECT_EQ(l.kind, LabelKind::kPaired);
  EXPECT_EQ(l.cv, "CV2");
  EXPECT_EQ(l.side, Side::kHi);
}

TEST(LabelTest, UnknownLabelIsAnError) {
  for (const std::string text : {"", "CV1", "CV1-MID", "INFEASIBLE", "oos"}) {
    try {
      ParseLabel(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kUnknownLabel);
    }
  }
}

TEST(TimestampTest, Parses) {
  EXPECT_EQ(ParseTimestamp("1970-01-01T00:00:00Z"), 0.0);
  EXPECT_EQ(ParseTimestamp("2024-01-01T00:00:00Z"), 1704067200.0);
  EXPECT_EQ(ParseTimestamp("2024-01-01"), 1704067200.0);
  EXPECT_EQ(ParseTimestamp("2024-01-01T01:00:00+01:00"), 1704067200.0);
  EXPECT_EQ(ParseTimestamp("2024-02-29T12:30:15.5Z"), 1709209815.5);
  EXPECT_THROW(ParseTimestamp("yesterday"), Error);
  EXPECT_THROW(ParseTimestamp("2024-13-01"), Error);
}

TEST(HistoryTest, RecordsPerInterval) {
  std::ifstream in(LPX_FIXTURE_DIR "/history3.jsonl");
  const HistoryRun run = RunHistory(in);
  EXPECT_EQ(run.mv_ids, (std::vector<std::string>{"MV1", "MV2"}));
  ASSERT_EQ(run.records.size(), 3u);
  EXPECT_EQ(run.records[0].mv_labels[0].Text(), "CV1-HI");
  EXPECT_EQ(run.records[0].mv_labels[1].Text(), "CV2-LO");
  EXPECT_EQ(run.records[2].mv_labels[0].Text(), "OOS");
  for (const auto& r : run.records) EXPECT_FALSE(r.failed);
}

TEST(HistoryTest, MarkdownHasThreeDataColumns) {
  const std::string md = RenderHistoryMarkdown(FixtureReport());
  EXPECT_NE(md.find("| MV | S1 | S2 | S3 | S∞ |"), std::string::npos) << md;
  EXPECT_NE(md.find("| MV1 | CV1-HI (33.3%) | CV2-HI (33.3%) | OOS (33.3%) |"), std::string::npos)
      << md;
  EXPECT_NE(md.find("| MV2 | CV2-LO (66.7%) | CV1-LO (33.3%) |"), std::string::npos) << md;
}

TEST(HistoryTest, RowsAreRankedByOccupancy) {
  const HistoryReport r = FixtureReport();
  EXPECT_EQ(r.intervals, 3);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[1].top[0].label, "CV2-LO");
  EXPECT_EQ(r.rows[1].top[0].count, 2);
  EXPECT_GE(r.rows[1].top[0].count, r.rows[1].top[1].count);
  EXPECT_EQ(r.start, "2024-03-01T08:00:00Z");
  EXPECT_EQ(r.end, "2024-03-01T08:02:00Z");
}

TEST(HistoryTest, OverflowGoesToLastColumn) {
  std::ifstream in(LPX_FIXTURE_DIR "/history3.jsonl");
  const HistoryReport r = Aggregate(RunHistory(in), 1);
  EXPECT_EQ(r.rows[0].top.size(), 1u);
  EXPECT_EQ(r.rows[0].rest.size(), 2u);
  const std::string csv = RenderHistoryCsv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "MV,S1,S_inf");
}

TEST(HistoryTest, EmptyHistory) {
  EXPECT_EQ(CodeOf(""), ErrorCode::kEmptyHistory);
  EXPECT_EQ(CodeOf("\n  \n"), ErrorCode::kEmptyHistory);
}

TEST(HistoryTest, OutOfOrderTimestamp) {
  const auto s = Fixture();
  EXPECT_EQ(CodeOf(Line(s, "2024-03-01T08:01:00Z") + Line(s, "2024-03-01T08:00:00Z")),
            ErrorCode::kOutOfOrderTimestamp);
}

TEST(HistoryTest, MalformedLineNamesLineNumber) {
  const auto s = Fixture();
  std::istringstream in(Line(s, "2024-03-01T08:00:00Z") + "{\"timestamp\": 3}\n");
  try {
    RunHistory(in, {.jobs = 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(HistoryTest, ChangedIdsAreRejected) {
  auto s = Fixture();
  auto t = s;
  t.cvs[2].id = "CV9";
  EXPECT_EQ(CodeOf(Line(s, "2024-03-01T08:00:00Z") + Line(t, "2024-03-01T08:01:00Z")),
            ErrorCode::kIdMismatch);
}

TEST(HistoryTest, SolverFailureBecomesFailedRecord) {
  auto s = Fixture();
  auto bad = s;
  bad.gains.col(1).setZero();  // MV2 moves nothing and has a cost: unbounded
  std::istringstream in(Line(s, "2024-03-01T08:00:00Z") + Line(bad, "2024-03-01T08:01:00Z"));
  const HistoryRun run = RunHistory(in, {.jobs = 1});
  ASSERT_EQ(run.records.size(), 2u);
  EXPECT_TRUE(run.records[1].failed);
  EXPECT_NE(run.records[1].error.find("Unbounded"), std::string::npos);
  const HistoryReport r = Aggregate(run);
  EXPECT_EQ(r.failed, 1);
  EXPECT_EQ(r.rows[0].top[0].display, "50.0%");
}

TEST(HistoryTest, GivenUpCvsAreListed) {
  auto s = Fixture();
  auto bad = s;
  bad.cv_ss[2] = 50.0;
  bad.cv_rank = {1, 1, 2};
  bad.mv_bounds = {{40.0, 60.0}, {380.0, 420.0}};
  std::istringstream in(Line(s, "2024-03-01T08:00:00Z") + Line(bad, "2024-03-01T08:01:00Z"));
  const HistoryReport r = Aggregate(RunHistory(in, {.jobs = 1}));
  ASSERT_EQ(r.infeasible.size(), 1u);
  EXPECT_EQ(r.infeasible[0].cv, "CV3");
  EXPECT_EQ(r.infeasible[0].display, "50.0%");
  const std::string md = RenderHistoryMarkdown(r);
  EXPECT_NE(md.find("Infeasible"), std::string::npos) << md;
  EXPECT_NE(md.find("CV3"), std::string::npos);
}

TEST(HistoryTest, ParallelRunsMatchSerial) {
  SyntheticOptions o;
  o.n = 8;
  o.m = 15;
  o.seed = 42;
  std::ostringstream out;
  WriteSyntheticHistory(out, o, 400);
  const std::string text = out.str();
  auto report = [&](int jobs, int batch) {
    std::istringstream in(text);
    return HistoryReportToJson(Aggregate(RunHistory(in, {.jobs = jobs, .batch = batch}))).dump();
  };
  const std::string serial = report(1, 256);
  EXPECT_EQ(report(4, 256), serial);
  EXPECT_EQ(report(3, 7), serial);
}

TEST(OverlayTest, IntentColorsLivePairings) {
  HistoryReport r = FixtureReport();
  const auto live = Explain(LoadSnapshot(LPX_FIXTURE_DIR "/live.json"));
  OverlayLive(r, live, LoadIntent(LPX_FIXTURE_DIR "/intent.json"));
  ASSERT_TRUE(r.overlay.has_value());
  EXPECT_TRUE(r.overlay->intent_configured);
  ASSERT_TRUE(r.rows[0].live.has_value());
  EXPECT_EQ(r.rows[0].live->color, Color::kGreen);
  EXPECT_EQ(r.rows[0].live->label, "CV1-HI");
  EXPECT_EQ(r.rows[1].live->color, Color::kYellow);
  const std::string md = RenderHistoryMarkdown(r);
  EXPECT_NE(md.find("CV1-HI (33.3%) [GREEN]"), std::string::npos) << md;
  const json j = HistoryReportToJson(r);
  EXPECT_EQ(j["rows"][0]["live"]["color"], "GREEN");
  EXPECT_EQ(j["overlay"]["intent_configured"], true);
}

TEST(OverlayTest, NoIntentIsVisible) {
  HistoryReport r = FixtureReport();
  OverlayLive(r, Explain(LoadSnapshot(LPX_FIXTURE_DIR "/live.json")), std::nullopt);
  EXPECT_FALSE(r.overlay->intent_configured);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.live->color, Color::kYellow);
    EXPECT_EQ(row.live->reason, "no intent configured");
  }
  EXPECT_EQ(HistoryReportToJson(r)["intent_configured"], false);
}

TEST(OverlayTest, GivenUpCvIsRed) {
  HistoryReport r = FixtureReport();
  auto s = Fixture();
  s.cv_ss[2] = 50.0;
  s.cv_rank = {1, 1, 2};
  s.mv_bounds = {{40.0, 60.0}, {380.0, 420.0}};
  OverlayLive(r, Explain(s), std::nullopt);
  ASSERT_EQ(r.overlay->cvs.size(), 1u);
  EXPECT_EQ(r.overlay->cvs[0].first, "CV3");
  EXPECT_EQ(r.overlay->cvs[0].second.color, Color::kRed);
}

TEST(OverlayTest, ClampedMvIsYellow) {
  HistoryReport r = FixtureReport();
  auto s = Fixture();
  s.mv_bounds[0] = {50.0, 50.0};
  OverlayLive(r, Explain(s), LoadIntent(LPX_FIXTURE_DIR "/intent.json"));
  EXPECT_EQ(r.rows[0].live->color, Color::kYellow);
  EXPECT_EQ(r.rows[0].live->label.rfind("MV-", 0), 0u) << r.rows[0].live->label;
}

TEST(OverlayTest, MismatchedIdsAreRejected) {
  HistoryReport r = FixtureReport();
  auto s = Fixture();
  s.mvs[1].id = "MV9";
  try {
    OverlayLive(r, Explain(s), std::nullopt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIdMismatch);
  }
  const std::vector<IntentEntry> intent = {{"MV1", "CV7", Side::kHi}};
  EXPECT_THROW(OverlayLive(r, Explain(Fixture()), intent), Error);
}

TEST(IntentTest, ParsesBothShapes) {
  const auto list = ParseIntent(json::parse(R"([{"mv": "MV1", "cv": "CV1", "side": "HI"}])"));
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0].side, Side::kHi);
  EXPECT_EQ(LoadIntent(LPX_FIXTURE_DIR "/intent.json").size(), 2u);
  EXPECT_THROW(ParseIntent(json::parse(R"([{"mv": "MV1", "cv": "CV1", "side": "UP"}])")), Error);
}

}  // namespace
}  // namespace lpx
