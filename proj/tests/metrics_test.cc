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

#include <gtest/gtest.h>

#include "vp/cli/selftest.h"
#include "vp/core/error.h"
#include "vp/core/rng.h"
#include "vp/eval/metrics.h"

namespace vp {
namespace {

RocCurve RocOf(const std::vector<double>& members, const std::vector<double>& nonmembers) {
  std::vector<double> scores = members;
  scores.insert(scores.end(), nonmembers.begin(), nonmembers.end());
  std::vector<bool> labels(members.size(), true);
  labels.resize(scores.size(), false);
  return Roc(scores, labels);
}

TEST(PrecisionTest, HandCases) {
  const SequenceMap truth = {{"a", {1, 2}}, {"b", {3}}, {"c", {4, 5}}, {"d", {6}}};
  SequenceMap top1 = {{"a", {1, 2}}, {"b", {3}}, {"c", {4, 9}}, {"d", {7}}};
  EXPECT_DOUBLE_EQ(PrecisionMp(top1, truth), 0.5);
  EXPECT_DOUBLE_EQ(PrecisionMp(truth, truth), 1.0);
  top1 = truth;
  top1["a"] = {1};
  EXPECT_DOUBLE_EQ(PrecisionMp(top1, truth), 0.75);
}

TEST(PrecisionTest, MismatchedKeysRejected) {
  EXPECT_THROW(PrecisionMp({{"a", {1}}}, {{"b", {1}}}), Error);
  EXPECT_THROW(PrecisionMp({}, {}), Error);
}

TEST(HammingTest, HandCases) {
  const TokenSeq truth(50, 7);
  TokenSeq one_off = truth;
  one_off[13] = 8;
  EXPECT_DOUBLE_EQ(HammingMh({{"x", truth}}, {{"x", truth}}).count, 0.0);
  EXPECT_DOUBLE_EQ(HammingMh({{"x", one_off}}, {{"x", truth}}).count, 1.0);
  const HammingResult empty = HammingMh({{"x", {}}}, {{"x", truth}});
  EXPECT_DOUBLE_EQ(empty.count, 50.0);
  EXPECT_DOUBLE_EQ(empty.normalized, 1.0);
}

TEST(HammingTest, LongerCandidateCountsExtraTokens) {
  EXPECT_DOUBLE_EQ(HammingMh({{"x", {1, 2, 3, 4}}}, {{"x", {1, 2}}}).count, 2.0);
}

TEST(RocTest, HandCases) {
  EXPECT_DOUBLE_EQ(RocOf({0.9, 0.8}, {0.1, 0.2}).auroc, 1.0);
  EXPECT_DOUBLE_EQ(RocOf({0.5, 0.5}, {0.5, 0.5}).auroc, 0.5);
  EXPECT_DOUBLE_EQ(RocOf({0.3, 0.7}, {0.4}).auroc, 0.5);
}

TEST(RocTest, CurveEndpoints) {
  const RocCurve c = RocOf({0.3, 0.7}, {0.4});
  EXPECT_EQ(c.points.front().fpr, 0.0);
  EXPECT_EQ(c.points.front().tpr, 0.0);
  EXPECT_TRUE(std::isinf(c.points.front().threshold));
  EXPECT_EQ(c.points.back().fpr, 1.0);
  EXPECT_EQ(c.points.back().tpr, 1.0);
  EXPECT_EQ(c.n_pos, 2u);
  EXPECT_EQ(c.n_neg, 1u);
}

TEST(RocTest, OperatingPoints) {
  const RocCurve perfect = RocOf({0.9, 0.8}, {0.1, 0.2});
  EXPECT_DOUBLE_EQ(TprAtFpr(perfect), 1.0);
  EXPECT_DOUBLE_EQ(FprAtTpr(perfect), 0.0);
  const RocCurve ties = RocOf({0.5, 0.5}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(TprAtFpr(ties), 0.0);
  EXPECT_DOUBLE_EQ(FprAtTpr(ties), 1.0);
  const RocCurve hand = RocOf({0.3, 0.7}, {0.4});
  // Sweep: t=0.7 gives (fpr 0, tpr 0.5); t=0.4 gives (1, 0.5); t=0.3 gives (1, 1).
  EXPECT_DOUBLE_EQ(TprAtFpr(hand, 0.05), 0.5);
  EXPECT_DOUBLE_EQ(FprAtTpr(hand, 0.95), 1.0);
}

TEST(RocTest, SingleClassIsMetricError) {
  try {
    RocOf({0.1, 0.2}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMetric);
  }
}

TEST(RocTest, NonFiniteScoreRejected) {
  EXPECT_THROW(RocOf({NAN, 0.2}, {0.1}), Error);
}

TEST(RocTest, BruteForceOracle) {
  const CheckResult r = CheckRocOracle(300, 77);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(RocTest, TrapezoidMatchesRankStatistic) {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> scores;
    std::vector<bool> labels;
    for (int j = 0; j < 40; ++j) {
      scores.push_back(static_cast<double>(rng.Below(6)));
      labels.push_back(j % 3 == 0);
    }
    const RocCurve c = Roc(scores, labels);
    EXPECT_NEAR(TrapezoidArea(c), c.auroc, 1e-9);
  }
}

TEST(ClassifierMetricsTest, AccuracyAtThreshold) {
  const std::vector<double> s = {0.9, 0.4, 0.6, 0.1};
  EXPECT_DOUBLE_EQ(Accuracy(s, {true, true, false, false}, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(Accuracy(s, {true, false, true, false}, 0.5), 1.0);
}

TEST(SelftestTest, AllChecksPass) {
  for (const CheckResult& r : RunSelftest(3)) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}

}  // namespace
}  // namespace vp
