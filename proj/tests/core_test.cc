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
#include <atomic>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "vp/core/artifact.h"
#include "vp/core/dataset.h"
#include "vp/core/error.h"
#include "vp/core/json_io.h"
#include "vp/core/parallel.h"
#include "vp/core/rng.h"
#include "vp/core/score_config.h"
#include "vp/core/text.h"

namespace vp {
namespace {

namespace fs = std::filesystem;

std::vector<std::uint64_t> Draws(Rng rng, int n) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < n; ++i) out.push_back(rng.Next());
  return out;
}

TEST(RngTest, SameSeedAndLabelReplay) {
  EXPECT_EQ(Draws(SeededRng(7, "gen/ex42"), 100), Draws(SeededRng(7, "gen/ex42"), 100));
}

TEST(RngTest, DifferentLabelsDiverge) {
  EXPECT_NE(Draws(SeededRng(7, "gen/ex42"), 100), Draws(SeededRng(7, "gen/ex43"), 100));
}

TEST(RngTest, DifferentSeedsDiverge) {
  EXPECT_NE(Draws(SeededRng(7, "x"), 100), Draws(SeededRng(8, "x"), 100));
}

TEST(RngTest, UniformAndBelowStayInRange) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.Below(7), 7u);
  }
}

TEST(RngTest, NormalHasUnitMoments) {
  Rng rng(11);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.Normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.03);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(RngTest, ShuffleIsAPermutation) {
  Rng rng(5);
  std::vector<int> v = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  rng.Shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
}

TEST(RngTest, FnvMatchesPublishedVectors) {
  EXPECT_EQ(HashBytes(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(HashBytes("a"), 0xaf63dc4c8601ec8cULL);
}

std::vector<ExtractionExample> Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseExamples(in, "mem.jsonl");
}

TEST(DatasetTest, ThreeLinesInFileOrder) {
  const auto ex = Parse(
      R"({"id":"b","prefix_tokens":[1],"suffix_tokens":[2]})"
      "\n"
      R"({"id":"a","prefix_tokens":[3,4],"suffix_tokens":[5]})"
      "\n\n"
      R"({"id":"c","prefix_text":"x","suffix_text":"y"})"
      "\n");
  ASSERT_EQ(ex.size(), 3u);
  EXPECT_EQ(ex[0].id, "b");
  EXPECT_EQ(ex[1].prefix_tokens, (TokenSeq{3, 4}));
  EXPECT_EQ(ex[2].prefix_text, "x");
}

TEST(DatasetTest, EmptyPrefixNamesTheLine) {
  try {
    Parse(R"({"id":"a","prefix_tokens":[1],"suffix_tokens":[2]})"
          "\n"
          R"({"id":"b","prefix_tokens":[],"suffix_tokens":[2]})");
    FAIL() << "expected a schema error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchema);
    EXPECT_NE(std::string(e.what()).find("mem.jsonl:2"), std::string::npos);
  }
}

TEST(DatasetTest, DuplicateIdRejected) {
  try {
    Parse(R"({"id":"a","prefix_tokens":[1],"suffix_tokens":[2]})"
          "\n"
          R"({"id":"a","prefix_tokens":[1],"suffix_tokens":[2]})");
    FAIL() << "expected a duplicate-id error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate id 'a'"), std::string::npos);
  }
}

TEST(DatasetTest, MalformedJsonIsParseError) {
  try {
    Parse("{not json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_TRUE(e.is_validation());
  }
}

TEST(DatasetTest, SaveLoadRoundTrip) {
  const fs::path dir = fs::temp_directory_path() / "vp_dataset_test";
  fs::create_directories(dir);
  std::vector<ExtractionExample> ex(2);
  ex[0].id = "e0";
  ex[0].prefix_tokens = {1, 2, 3};
  ex[0].suffix_tokens = {4};
  ex[1].id = "e1";
  ex[1].prefix_tokens = {9};
  ex[1].suffix_tokens = {8, 7};
  ex[1].prefix_text = "pre";
  ex[1].suffix_text = "suf";
  SaveExamples(dir / "x.jsonl", ex);
  const auto back = LoadExamples(dir / "x.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].suffix_tokens, ex[0].suffix_tokens);
  EXPECT_EQ(back[1].prefix_text, "pre");
  fs::remove_all(dir);
}

TEST(TextTest, LowercasesBeyondAscii) {
  EXPECT_EQ(ToLowerUtf8("Hello WORLD"), "hello world");
  EXPECT_EQ(ToLowerUtf8("\xC3\x84pfel \xCE\xA3"), "\xC3\xA4pfel \xCF\x83");
  EXPECT_EQ(ToLowerUtf8("already lower"), "already lower");
}

TEST(TextTest, InvalidBytesPassThrough) {
  EXPECT_EQ(ToLowerUtf8("A\xFF" "B"), "a\xFF" "b");
}

TEST(TraceTest, CheckTraceCatchesViolations) {
  TokenTrace t{1, -0.5, -1.0, 0.5, 1.0, 1, -0.5};
  EXPECT_FALSE(CheckTrace(t).has_value());
  TokenTrace bad = t;
  bad.sigma = -0.1;
  EXPECT_TRUE(CheckTrace(bad).has_value());
  bad = t;
  bad.logprob = -0.1;
  EXPECT_TRUE(CheckTrace(bad).has_value());
  bad = t;
  bad.entropy = 1.00001;
  EXPECT_TRUE(CheckTrace(bad).has_value());
  EXPECT_FALSE(CheckTrace(bad, 1e-4).has_value());
}

TEST(JsonIoTest, CandidateRoundTripIsExact) {
  ScoredCandidate c;
  c.example_id = "e";
  c.gen_index = 3;
  c.tokens = {5, 6};
  c.traces = {TokenTrace{5, -0.1234567890123, -1.5, 0.25, 1.5, 5, -0.1234567890123},
              TokenTrace{6, -2.0, -1.0, 0.5, 1.0, 7, -0.5}};
  c.scores = {{"likelihood", -1.0 / 3.0}};
  const ScoredCandidate back = CandidateFromJson(CandidateToJson(c));
  EXPECT_EQ(back.traces, c.traces);
  EXPECT_EQ(back.scores, c.scores);
  EXPECT_EQ(back.gen_index, 3u);
}

TEST(JsonIoTest, MissingTraceFieldIsWireError) {
  try {
    TraceFromJson(nlohmann::json{{"token", 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kWire);
  }
}

TEST(ArtifactTest, SaveLoadRoundTrip) {
  const fs::path dir = fs::temp_directory_path() / "vp_artifact_test";
  fs::remove_all(dir);
  RunArtifact a;
  a.run_id = "r1";
  a.config_snapshot = "[model]\nkind = \"reference\"\n";
  a.seed = 99;
  ScoredCandidate c;
  c.example_id = "e0";
  c.tokens = {1, 2};
  c.scores = {{"min_k", -2.5}};
  a.records = {c};
  a.labels = {{"e0", true}};
  a.metrics = {{"mp/likelihood", 0.75}};
  SaveArtifact(a, dir);
  const RunArtifact b = LoadArtifact(dir);
  EXPECT_EQ(b.run_id, "r1");
  EXPECT_EQ(b.config_snapshot, a.config_snapshot);
  EXPECT_EQ(b.seed, 99u);
  ASSERT_EQ(b.records.size(), 1u);
  EXPECT_EQ(b.records[0].scores, c.scores);
  EXPECT_EQ(b.labels, a.labels);
  EXPECT_EQ(b.metrics, a.metrics);
  fs::remove_all(dir);
}

TEST(ArtifactTest, UnlabeledRecordRejected) {
  RunArtifact a;
  ScoredCandidate c;
  c.example_id = "ghost";
  a.records = {c};
  EXPECT_THROW(CheckLabelsCover(a), Error);
}

TEST(ScoreConfigTest, BoundsNamed) {
  ScoreConfig c;
  c.min_k_fraction = 1.5;
  try {
    c.Validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    EXPECT_NE(std::string(e.what()).find("min_k_fraction"), std::string::npos);
  }
}

TEST(ParallelTest, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(257);
  ParallelFor(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelTest, RethrowsLowestIndexFailure) {
  try {
    ParallelFor(50, 3, [](std::size_t i) {
      if (i == 17 || i == 40) Fail(ErrorKind::kInput, std::to_string(i));
    });
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "17");
  }
}

}  // namespace
}  // namespace vp
