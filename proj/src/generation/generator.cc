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
#include "vp/generation/generator.h"

#include <set>

#include <fmt/core.h>

#include "vp/core/error.h"
#include "vp/generation/transforms.h"

namespace vp {

Token SampleFromDistribution(std::span<const double> probs, Rng& rng) {
  double total = 0.0;
  for (double p : probs) total += p;
  if (!(total > 0.0)) {
    Fail(ErrorKind::kGeneration, "cannot sample from an empty support");
  }
  const double target = rng.Uniform() * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t v = 0; v < probs.size(); ++v) {
    if (probs[v] <= 0.0) continue;
    last_positive = v;
    cumulative += probs[v];
    if (target < cumulative) return static_cast<Token>(v);
  }
  return static_cast<Token>(last_positive);
}

Token SampleToken(const LanguageModel& model, TokenSpan context,
                  const GenerationConfig& config, Rng& rng) {
  const std::vector<double> probs = model.NextDistribution(context);
  const std::vector<double> transformed =
      TransformDistribution(probs, config, context);
  return SampleFromDistribution(transformed, rng);
}

GeneratedSequence GreedyDecode(const LanguageModel& model, TokenSpan context,
                               int length) {
  GeneratedSequence out;
  TokenSeq window(context.begin(), context.end());
  for (int i = 0; i < length; ++i) {
    const std::vector<double> probs = model.NextDistribution(window);
    const Token next = ArgmaxToken(probs);
    out.traces.push_back(MakeTrace(probs, next));
    out.tokens.push_back(next);
    window.push_back(next);
  }
  return out;
}

std::vector<ScoredCandidate> GenerateCandidates(const LanguageModel& model,
                                                const ExtractionExample& example,
                                                const GenerationConfig& config) {
  config.Validate();
  if (example.prefix_tokens.empty()) {
    Fail(ErrorKind::kInput,
         fmt::format("example '{}' has no prefix tokens", example.id));
  }
  std::vector<GeneratedSequence> sequences;
  if (auto native = model.GenerateNative(example.prefix_tokens, config)) {
    sequences = std::move(*native);
  } else {
    sequences.reserve(config.num_candidates);
    for (int c = 0; c < config.num_candidates; ++c) {
      Rng rng = SeededRng(config.seed, fmt::format("gen/{}/{}", example.id, c));
      GeneratedSequence seq;
      TokenSeq window = example.prefix_tokens;
      for (int step = 0; step < config.max_new_tokens; ++step) {
        const std::vector<double> probs = model.NextDistribution(window);
        const std::vector<double> transformed =
            TransformDistribution(probs, config, window);
        const Token next = SampleFromDistribution(transformed, rng);
        seq.traces.push_back(MakeTrace(probs, next));
        seq.tokens.push_back(next);
        window.push_back(next);
      }
      sequences.push_back(std::move(seq));
    }
  }
  std::vector<ScoredCandidate> out;
  std::set<TokenSeq> seen;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    if (sequences[i].tokens.empty()) continue;
    if (!seen.insert(sequences[i].tokens).second) continue;
    ScoredCandidate c;
    c.example_id = example.id;
    c.gen_index = i;
    c.tokens = std::move(sequences[i].tokens);
    c.traces = std::move(sequences[i].traces);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace vp
