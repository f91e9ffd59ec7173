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
#include <set>

#include <gtest/gtest.h>

#include "vp/core/error.h"
#include "vp/core/rng.h"
#include "vp/generation/config.h"
#include "vp/generation/generator.h"
#include "vp/generation/transforms.h"
#include "vp/lm/ngram.h"

namespace vp {
namespace {

using Probs = std::vector<double>;

void ExpectNear(const Probs& got, const Probs& want, double tol = 1e-12) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << i;
}

Probs RandomProbs(Rng& rng, std::size_t n) {
  Probs p(n);
  double sum = 0.0;
  for (double& v : p) sum += v = rng.Uniform() + 1e-3;
  for (double& v : p) v /= sum;
  return p;
}

Probs Logits(const Probs& p) {
  Probs out;
  for (double v : p) out.push_back(std::log(v));
  return out;
}

TEST(PresetTest, ValuesAreExact) {
  GenerationConfig c;
  ApplyPreset("nucleus", c);
  EXPECT_EQ(c.top_p, 0.6);
  EXPECT_FALSE(c.top_k || c.temperature || c.typical_p || c.repetition_penalty);
  ApplyPreset("temperature", c);
  EXPECT_EQ(c.temperature, 0.3);
  EXPECT_FALSE(c.top_p);
  ApplyPreset("typical", c);
  EXPECT_EQ(c.typical_p, 0.6);
  ApplyPreset("topk", c);
  EXPECT_EQ(c.top_k, 10);
  ApplyPreset("rep_penalty", c);
  EXPECT_EQ(c.repetition_penalty, 1.1);
  ApplyPreset("composite", c);
  EXPECT_EQ(c.top_p, 0.8);
  EXPECT_EQ(c.top_k, 24);
  EXPECT_EQ(c.temperature, 0.58);
  EXPECT_EQ(c.repetition_penalty, 1.04);
  EXPECT_EQ(c.typical_p, 0.9);
  EXPECT_EQ(PresetNames().size(), 6u);
}

TEST(PresetTest, UnknownNameIsConfigError) {
  GenerationConfig c;
  try {
    ApplyPreset("beam", c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
}

TEST(GenerationConfigTest, BoundsNamed) {
  GenerationConfig c;
  c.top_p = 1.5;
  try {
    c.Validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("top_p"), std::string::npos);
  }
  c.top_p.reset();
  c.temperature = 0.0;
  EXPECT_THROW(c.Validate(), Error);
}

TEST(TemperatureTest, OneIsIdentity) {
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const Probs p = RandomProbs(rng, 12);
    ExpectNear(Softmax(ApplyTemperature(Logits(p), 1.0)), p);
  }
}

TEST(TemperatureTest, HalfSharpensHandCase) {
  const Probs logits = {0.0, std::log(3.0)};
  ExpectNear(Softmax(ApplyTemperature(logits, 0.5)), {0.1, 0.9});
}

TEST(TemperatureTest, LargeTemperatureFlattens) {
  const Probs logits = {-5.0, 0.0, 2.0, 7.0, -1.0};
  const Probs p = Softmax(ApplyTemperature(logits, 1000.0));
  EXPECT_LT(*std::max_element(p.begin(), p.end()) - *std::min_element(p.begin(), p.end()), 0.01);
}

TEST(TopKTest, Properties) {
  const Probs p = {0.5, 0.3, 0.2};
  ExpectNear(ApplyTopK(p, 3), p);
  ExpectNear(ApplyTopK(p, 10), p);
  ExpectNear(ApplyTopK(p, 2), {0.625, 0.375, 0.0});
  ExpectNear(ApplyTopK(Probs{0.2, 0.5, 0.3}, 1), {0.0, 1.0, 0.0});
}

TEST(TopKTest, TiesKeepLowerId) {
  ExpectNear(ApplyTopK(Probs{0.25, 0.25, 0.25, 0.25}, 2), {0.5, 0.5, 0.0, 0.0});
}

TEST(NucleusTest, Properties) {
  const Probs p = {0.5, 0.3, 0.2};
  ExpectNear(ApplyNucleus(p, 1.0), p);
  ExpectNear(ApplyNucleus(p, 0.6), {0.625, 0.375, 0.0});
  ExpectNear(ApplyNucleus(p, 0.4), {1.0, 0.0, 0.0});
  ExpectNear(ApplyNucleus(Probs{0.3, 0.3, 0.4}, 0.5), {0.3 / 0.7, 0.0, 0.4 / 0.7});
}

TEST(NucleusTest, BelowMaxIsOneHot) {
  ExpectNear(ApplyNucleus(Probs{0.1, 0.6, 0.3}, 0.55), {0.0, 1.0, 0.0});
}

TEST(TypicalTest, FullMassKeepsSupport) {
  Rng rng(2);
  const Probs p = RandomProbs(rng, 9);
  ExpectNear(ApplyTypical(p, 1.0), p);
}

TEST(TypicalTest, UniformKeepsLowestIds) {
  const Probs p(8, 0.125);
  ExpectNear(ApplyTypical(p, 0.3), {1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 0, 0, 0, 0});
}

TEST(TypicalTest, HandCase) {
  const Probs p = {0.7, 0.2, 0.1};
  double h = 0.0;
  for (double v : p) h -= v * std::log(v);
  EXPECT_NEAR(h, 0.8018, 1e-4);
  EXPECT_NEAR(std::abs(-std::log(0.7) - h), 0.445, 1e-3);
  EXPECT_NEAR(std::abs(-std::log(0.2) - h), 0.808, 1e-3);
  EXPECT_NEAR(std::abs(-std::log(0.1) - h), 1.501, 1e-3);
  ExpectNear(ApplyTypical(p, 0.5), {1.0, 0.0, 0.0});
}

TEST(RepetitionPenaltyTest, Properties) {
  const Probs logits = {2.0, -1.0, 0.5};
  ExpectNear(ApplyRepetitionPenalty(logits, TokenSeq{0, 1}, 1.0), logits);
  const Probs a = ApplyRepetitionPenalty(logits, TokenSeq{0}, 1.25);
  EXPECT_DOUBLE_EQ(a[0], 1.6);
  EXPECT_DOUBLE_EQ(a[2], 0.5);
  const Probs b = ApplyRepetitionPenalty(logits, TokenSeq{1, 1}, 2.0);
  EXPECT_DOUBLE_EQ(b[1], -2.0);
}

TEST(ChainTest, NeutralSettingsReturnInputExactly) {
  Rng rng(3);
  const Probs p = RandomProbs(rng, 16);
  GenerationConfig c;
  EXPECT_EQ(TransformDistribution(p, c, TokenSeq{1, 2}), p);
  c.top_k = 16;
  c.top_p = 1.0;
  c.typical_p = 1.0;
  c.temperature = 1.0;
  c.repetition_penalty = 1.0;
  ExpectNear(TransformDistribution(p, c, TokenSeq{1, 2}), p, 1e-12);
}

TEST(ChainTest, OutputIsADistribution) {
  Rng rng(4);
  for (const std::string& preset : PresetNames()) {
    GenerationConfig c;
    ApplyPreset(preset, c);
    const Probs out = TransformDistribution(RandomProbs(rng, 40), c, TokenSeq{3, 4, 5});
    double sum = 0.0;
    for (double v : out) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12) << preset;
  }
}

TEST(SamplerTest, NearDeterministicBinaryModel) {
  auto m = TrainNGram({TokenSeq(200, 0)}, 1, {1.0}, 2);
  GenerationConfig c;
  Rng rng(5);
  int zeros = 0;
  for (int i = 0; i < 1000; ++i) zeros += SampleToken(*m, {}, c, rng) == 0 ? 1 : 0;
  EXPECT_GE(zeros, 990);
}

TEST(SamplerTest, TopKOneIsArgmax) {
  auto m = TrainByteNGram({"abcabcabd", "xyz"}, 3);
  GenerationConfig c;
  c.top_k = 1;
  Rng rng(6);
  const TokenSeq ctx = m->Tokenize("ab");
  const Token argmax = ArgmaxToken(m->NextDistribution(ctx));
  for (int i = 0; i < 200; ++i) EXPECT_EQ(SampleToken(*m, ctx, c, rng), argmax);
}

TEST(SamplerTest, EmptySupportIsGenerationError) {
  Rng rng(1);
  try {
    SampleFromDistribution(Probs{0.0, 0.0}, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGeneration);
  }
}

TEST(GreedyTest, FollowsArgmax) {
  auto m = TrainByteNGram({"hello world"}, 4);
  const GeneratedSequence g = GreedyDecode(*m, m->Tokenize("hel"), 8);
  EXPECT_EQ(m->Detokenize(g.tokens), "lo world");
  ASSERT_EQ(g.traces.size(), 8u);
  for (const TokenTrace& t : g.traces) EXPECT_EQ(t.token, t.argmax_token);
}

ExtractionExample Example(const NGramModel& m, const std::string& id) {
  ExtractionExample e;
  e.id = id;
  e.prefix_tokens = m.Tokenize("the ");
  e.suffix_tokens = m.Tokenize("cat");
  return e;
}

TEST(GenerateCandidatesTest, FixedSeedReplays) {
  auto m = TrainByteNGram({"the cat sat", "the dog ran", "the cow ate"}, 3);
  GenerationConfig c;
  c.num_candidates = 8;
  c.max_new_tokens = 6;
  c.seed = 12;
  const auto a = GenerateCandidates(*m, Example(*m, "e1"), c);
  const auto b = GenerateCandidates(*m, Example(*m, "e1"), c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].tokens, b[i].tokens);
    EXPECT_EQ(a[i].traces, b[i].traces);
    EXPECT_EQ(a[i].gen_index, b[i].gen_index);
  }
}

TEST(GenerateCandidatesTest, DedupKeepsLowestIndex) {
  auto m = TrainByteNGram({std::string(300, 'a') + "b"}, 2);
  GenerationConfig c;
  c.num_candidates = 20;
  c.max_new_tokens = 3;
  const auto out = GenerateCandidates(*m, Example(*m, "e"), c);
  ASSERT_GE(out.size(), 1u);
  std::set<TokenSeq> seen;
  for (const auto& cand : out) EXPECT_TRUE(seen.insert(cand.tokens).second);
  EXPECT_EQ(out.front().gen_index, 0u);
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_LT(out[i - 1].gen_index, out[i].gen_index);
}

TEST(GenerateCandidatesTest, TracesDescribeRawModel) {
  auto m = TrainByteNGram({"the cat sat", "the dog ran"}, 3);
  GenerationConfig c;
  ApplyPreset("temperature", c);
  c.num_candidates = 4;
  c.max_new_tokens = 5;
  const ExtractionExample e = Example(*m, "e");
  for (const auto& cand : GenerateCandidates(*m, e, c)) {
    EXPECT_EQ(cand.traces, m->Trace(e.prefix_tokens, cand.tokens));
  }
}

TEST(GenerateCandidatesTest, StreamsArePerCandidate) {
  auto m = TrainByteNGram({"the cat sat", "the dog ran", "the cow ate"}, 3);
  GenerationConfig c;
  c.num_candidates = 4;
  c.max_new_tokens = 6;
  c.seed = 2;
  GenerationConfig more = c;
  more.num_candidates = 12;
  const auto small = GenerateCandidates(*m, Example(*m, "e"), c);
  const auto big = GenerateCandidates(*m, Example(*m, "e"), more);
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small[i].tokens, big[i].tokens);
}

}  // namespace
}  // namespace vp
