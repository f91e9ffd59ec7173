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
#ifndef VP_GENERATION_GENERATOR_H_
#define VP_GENERATION_GENERATOR_H_

#include <span>
#include <vector>

#include "vp/core/rng.h"
#include "vp/core/types.h"
#include "vp/generation/config.h"
#include "vp/lm/model.h"

namespace vp {

// Draws one token from `probs` (need not be normalized).
Token SampleFromDistribution(std::span<const double> probs, Rng& rng);

// One sampling step: the model's next distribution at `context`, pushed
// through the transform chain with `context` as the seen set.
Token SampleToken(const LanguageModel& model, TokenSpan context,
                  const GenerationConfig& config, Rng& rng);

// Greedy continuation of `length` tokens (argmax, lower id on ties).
GeneratedSequence GreedyDecode(const LanguageModel& model, TokenSpan context,
                               int length);

// Samples config.num_candidates continuations of the example prefix, each
// from its own stream "gen/<example_id>/<index>" under config.seed. Traces
// describe the untransformed model distribution. Exact duplicates are
// dropped, keeping the lowest gen_index. Scores are left empty.
std::vector<ScoredCandidate> GenerateCandidates(const LanguageModel& model,
                                                const ExtractionExample& example,
                                                const GenerationConfig& config);

}  // namespace vp

#endif  // VP_GENERATION_GENERATOR_H_
