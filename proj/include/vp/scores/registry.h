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
#ifndef VP_SCORES_REGISTRY_H_
#define VP_SCORES_REGISTRY_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vp/core/score_config.h"
#include "vp/core/types.h"
#include "vp/lm/model.h"
#include "vp/lm/prefix_set.h"
#include "vp/scores/scores.h"

namespace vp {

enum class ScoreMode { kSuffixOnly, kFullSequence };

std::string_view ScoreModeName(ScoreMode mode);
ScoreMode ParseScoreMode(std::string_view name);

// Bit flags naming the ScoreInput fields a score reads.
enum Requirement : unsigned {
  kNeedSuffix = 1u << 0,
  kNeedSuffixUncond = 1u << 1,
  kNeedNonMember = 1u << 2,
  kNeedMember = 1u << 3,
  kNeedFullUncond = 1u << 4,
  kNeedLowercase = 1u << 5,
  kNeedText = 1u << 6,
  kNeedBatchMean = 1u << 7,
};

struct ScoreDef {
  std::string_view name;
  unsigned requirements;
  bool full_sequence;  // also defined over (p, s) in full-sequence mode
  double (*compute)(const ScoreInput&, const ScoreConfig&);
};

// The eleven scores in canonical report order.
const std::vector<ScoreDef>& ScoreRegistry();
const ScoreDef& FindScore(std::string_view name);  // throws kConfig
std::vector<std::string> AllScoreNames();
std::vector<std::string> FullSequenceScoreNames();

// Names that survive `mode` (full-sequence keeps the seven scores defined
// over whole sequences), in canonical order.
std::vector<std::string> ScoresForMode(const std::vector<std::string>& enabled,
                                       ScoreMode mode);

unsigned CombinedRequirements(const std::vector<std::string>& names);

// Traces and text for one (example, candidate) pair, computing only the
// fields in `requirements`. In full-sequence mode suffix_traces and
// suffix_text describe (p, s) with an empty context.
ScoreInput BuildScoreInput(const LanguageModel& model,
                           const ExtractionExample& example,
                           const ScoredCandidate& candidate,
                           const ScoreConfig& config,
                           const ReferencePrefixSet* prefix_set,
                           ScoreMode mode, unsigned requirements,
                           std::optional<double> batch_mean_logprob);

struct ScoreOutcome {
  std::map<std::string, double> scores;
  std::vector<std::string> errors;  // one per failed score, not fail-fast
};

// Evaluates every enabled score that `mode` admits. Requirement failures
// (e.g. ReCaLL without a prefix set) are collected per score.
ScoreOutcome ComputeAllScores(const LanguageModel& model,
                              const ExtractionExample& example,
                              const ScoredCandidate& candidate,
                              const ScoreConfig& config,
                              const ReferencePrefixSet* prefix_set,
                              ScoreMode mode,
                              const std::vector<std::string>& enabled,
                              std::optional<double> batch_mean_logprob);

// Evaluates the named scores on an already-built input.
ScoreOutcome EvaluateScores(const ScoreInput& input, const ScoreConfig& config,
                            const std::vector<std::string>& names);

// Mean token logprob over all traces of a candidate batch.
double BatchMeanLogprob(const std::vector<ScoredCandidate>& batch);

}  // namespace vp

#endif  // VP_SCORES_REGISTRY_H_
