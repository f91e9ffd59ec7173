// Copyright 2026 The vprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>
#include <json.hpp>

#include "vp/core/error.h"
#include "vp/core/rng.h"
#include "vp/eval/metrics.h"
#include "vp/lm/ngram.h"
#include "vp/pipeline/config.h"
#include "vp/pipeline/pipeline.h"
#include "vp/pipeline/report.h"

namespace vp {
namespace {

namespace fs = std::filesystem;

std::string Letters(Rng& rng, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += static_cast<char>('a' + rng.Below(26));
  return s;
}

// Six memorized documents and six fresh ones. Member suffixes continue
// their prefix in the corpus; nonmember text was never trained on.
struct Toy {
  std::vector<std::string> corpus;
  std::vector<ExtractionExample> members;
  std::vector<ExtractionExample> nonmembers;
};

Toy MakeToy() {
  Toy t;
  Rng rng = SeededRng(7, "toy");
  for (int i = 0; i < 12; ++i) {
    const std::string doc = Letters(rng, 80);
    ExtractionExample ex;
    ex.id = (i < 6 ? "m" : "n") + std::to_string(i);
    ex.prefix_text = doc.substr(0, 40);
    ex.suffix_text = doc.substr(40, 16);
    if (i < 6) {
      t.corpus.push_back(doc);
      t.members.push_back(ex);
    } else {
      t.nonmembers.push_back(ex);
    }
  }
  for (int i = 0; i < 6; ++i) t.corpus.push_back(Letters(rng, 200));
  return t;
}

RunConfig ToyConfig(const std::vector<std::string>& overrides = {}) {
  return ParseRunConfig(R"(
[generation]
preset = "composite"
num_candidates = 6
seed = 11

[scores]
enabled = ["likelihood", "zlib", "high_conf", "outlier", "surp", "lowercase",
           "min_k", "min_k_pp"]
)",
                        "toy.toml", overrides);
}

Pipeline ToyPipeline(bool with_nonmembers,
                     const std::vector<std::string>& overrides = {}) {
  const Toy toy = MakeToy();
  std::vector<ExtractionExample> examples = toy.members;
  if (with_nonmembers) {
    examples.insert(examples.end(), toy.nonmembers.begin(), toy.nonmembers.end());
  }
  return OpenPipeline(ToyConfig(overrides), TrainByteNGram(toy.corpus, 12),
                      std::move(examples));
}

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no vp::Error thrown";
  return ErrorKind::kIo;
}

TEST(ConfigTest, DefaultsAndParsedValues) {
  const RunConfig c = ToyConfig();
  EXPECT_EQ(c.generation.preset, "composite");
  EXPECT_EQ(c.generation.sampling.num_candidates, 6);
  EXPECT_EQ(c.seed(), 11u);
  EXPECT_EQ(c.enabled_scores.size(), 8u);
  EXPECT_DOUBLE_EQ(c.scores.min_k_fraction, 0.2);
  EXPECT_EQ(c.confirmation.mode, "both");
}

TEST(ConfigTest, UnknownKeyIsRejected) {
  EXPECT_EQ(KindOf([] { ParseRunConfig("[scores]\nmin_kk = 0.2\n", "x.toml"); }),
            ErrorKind::kConfig);
  try {
    ParseRunConfig("[scores]\nmin_kk = 0.2\n", "x.toml");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("min_kk"), std::string::npos);
  }
}

TEST(ConfigTest, OverridesWin) {
  const RunConfig c = ToyConfig({"scores.min_k_fraction=0.5", "generation.seed=3"});
  EXPECT_DOUBLE_EQ(c.scores.min_k_fraction, 0.5);
  EXPECT_EQ(c.seed(), 3u);
}

TEST(ConfigTest, OutOfBoundsNamesTheKey) {
  try {
    ToyConfig({"scores.min_k_fraction=1.5"}).Validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.is_validation());
    EXPECT_NE(std::string(e.what()).find("min_k_fraction"), std::string::npos);
  }
}

TEST(ConfigTest, SnapshotRoundTrips) {
  const RunConfig c = ToyConfig({"scores.recall_num_prefixes=4"});
  const std::string snap = SnapshotToml(c);
  const RunConfig back = ParseRunConfig(snap, "snapshot.toml");
  EXPECT_EQ(SnapshotToml(back), snap);
  EXPECT_EQ(back.scores.recall_num_prefixes, 4);
}

TEST(ConfigTest, SnapshotOmitsToken) {
  RunConfig c = ToyConfig();
  c.model.auth_token = "s3cret";
  EXPECT_EQ(SnapshotToml(c).find("s3cret"), std::string::npos);
}

ReportTable SampleTable() {
  ReportTable t;
  t.name = "sample";
  t.key_columns = {"method"};
  t.value_columns = {"auroc", "tpr_at_05fpr"};
  t.rows = {{{"likelihood"}, {0.1 + 0.2, 1.0 / 3.0}}, {{"zlib"}, {0.5, 1e-17}}};
  return t;
}

TEST(ReportTest, CsvRoundTripsExactly) {
  const ReportTable t = SampleTable();
  const ReportTable back = ParseCsv(FormatCsv(t), "sample");
  EXPECT_EQ(back.key_columns, t.key_columns);
  EXPECT_EQ(back.value_columns, t.value_columns);
  EXPECT_EQ(back.rows, t.rows);
}

TEST(ReportTest, JsonAndMarkdownShapes) {
  const ReportTable t = SampleTable();
  const auto j = nlohmann::json::parse(FormatJson(t));
  EXPECT_EQ(j["name"], "sample");
  const std::string md = FormatMarkdown(t);
  EXPECT_NE(md.find("| likelihood | 0.3000 | 0.3333 |"), std::string::npos) << md;
  EXPECT_DOUBLE_EQ(t.At("zlib", "auroc"), 0.5);
}

TEST(ReportTest, EmitWritesEachFormat) {
  const fs::path dir = fs::temp_directory_path() / "vp_report_test";
  fs::remove_all(dir);
  const auto files = EmitReport(SampleTable(), {"csv", "json", "markdown"}, dir);
  EXPECT_EQ(files.size(), 3u);
  for (const fs::path& f : files) EXPECT_TRUE(fs::exists(f)) << f;
  fs::remove_all(dir);
}

TEST(RankingTest, ReplaysIdentically) {
  const Pipeline p = ToyPipeline(true);
  const RankingOutcome a = RunRanking(p, {"likelihood", "zlib"});
  const Pipeline q = ToyPipeline(true);
  const RankingOutcome b = RunRanking(q, {"likelihood", "zlib"});
  ASSERT_EQ(a.trials[0].records.size(), b.trials[0].records.size());
  for (std::size_t i = 0; i < a.trials[0].records.size(); ++i) {
    EXPECT_EQ(a.trials[0].records[i].tokens, b.trials[0].records[i].tokens);
    EXPECT_EQ(a.trials[0].records[i].scores, b.trials[0].records[i].scores);
  }
  EXPECT_EQ(a.table.rows, b.table.rows);
}

TEST(RankingTest, OneRowPerRanker) {
  const RankingOutcome r = RunRanking(ToyPipeline(true), {"likelihood", "zlib"});
  ASSERT_EQ(r.table.rows.size(), 2u);
  EXPECT_EQ(r.table.rows[0].keys[0], "likelihood");
  EXPECT_EQ(r.table.rows[1].keys[0], "zlib");
}

TEST(RankingTest, MemorizedSuffixesAreFound) {
  const RankingOutcome r = RunRanking(ToyPipeline(false), {"likelihood"});
  EXPECT_DOUBLE_EQ(r.table.At("likelihood", kMetricMp), 1.0);
  EXPECT_DOUBLE_EQ(r.table.At("likelihood", kMetricMhCount), 0.0);
}

TEST(RankingTest, UnknownRankerFails) {
  EXPECT_EQ(KindOf([] { RunRanking(ToyPipeline(true), {"nope"}); }),
            ErrorKind::kConfig);
}

TEST(ConfirmationTest, PerfectSeparationGivesAurocOne) {
  ConfirmationSet set;
  for (int i = 0; i < 10; ++i) {
    ConfirmationItem item;
    item.label = i < 5;
    item.top1.example_id = "e" + std::to_string(i);
    item.top1.scores["likelihood"] = item.label ? -0.1 * i : -5.0 - i;
    set.items.push_back(item);
  }
  const auto m = ConfirmationMetrics(set, {"likelihood"});
  EXPECT_DOUBLE_EQ(m.at("auroc/likelihood"), 1.0);
  EXPECT_DOUBLE_EQ(m.at("tpr_at_05fpr/likelihood"), 1.0);
  EXPECT_DOUBLE_EQ(m.at("fpr_at_95tpr/likelihood"), 0.0);
}

TEST(ConfirmationTest, OneClassIsAMetricError) {
  ConfirmationSet set;
  set.items.resize(3);
  EXPECT_EQ(KindOf([&] { ConfirmationMetrics(set, {"likelihood"}); }),
            ErrorKind::kMetric);
}

TEST(ConfirmationTest, BothModesOnToyData) {
  const ConfirmationOutcome out = RunConfirmation(ToyPipeline(true));
  ASSERT_EQ(out.tables.size(), 2u);
  EXPECT_EQ(out.sets[0].members(), 6u);
  EXPECT_EQ(out.sets[0].nonmembers(), 6u);
  EXPECT_DOUBLE_EQ(out.tables[0].At("likelihood", kMetricAuroc), 1.0);
  // Every enabled full-sequence score applies here.
  EXPECT_EQ(out.tables[1].rows.size(), 7u);
}

TEST(SweepTest, FullMinKMatchesLikelihoodWithoutNewCalls) {
  const Pipeline p = ToyPipeline(
      true, {"sweep.axis=\"min_k_fraction\"", "sweep.values=[0.2, 1.0]"});
  const SweepOutcome s = RunSweep(p);
  EXPECT_EQ(s.calls_after_first_value, 0u);
  const std::vector<std::string> cols = s.table.value_columns;
  const ReportTable::Row* min_k = nullptr;
  const ReportTable::Row* lik = nullptr;
  for (const auto& row : s.table.rows) {
    if (row.keys[0] != "1") continue;
    if (row.keys[1] == "min_k") min_k = &row;
    if (row.keys[1] == "likelihood") lik = &row;
  }
  ASSERT_TRUE(min_k && lik);
  EXPECT_EQ(min_k->values, lik->values);
  EXPECT_NE(s.plot_json.find("min_k_fraction"), std::string::npos);
}

TEST(SweepTest, OneRowPerValueAndMethod) {
  const Pipeline p = ToyPipeline(
      true, {"sweep.axis=\"recall_num_prefixes\"", "sweep.values=[1, 4, 8]"});
  const SweepOutcome s = RunSweep(p);
  const std::size_t methods = UsableScores(p, ScoreMode::kSuffixOnly).size();
  EXPECT_EQ(s.table.rows.size(), 3 * methods);
}

TEST(SweepTest, BadAxisFails) {
  ScoreConfig c;
  EXPECT_EQ(KindOf([&] { SetSweepAxis(c, "temperature", 1.0); }), ErrorKind::kConfig);
  EXPECT_EQ(KindOf([&] { SetSweepAxis(c, "recall_num_prefixes", 1.5); }),
            ErrorKind::kConfig);
}

}  // namespace
}  // namespace vp
