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
#ifndef VP_MEMLAB_LAB_H_
#define VP_MEMLAB_LAB_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vp/core/score_config.h"
#include "vp/ensemble/ensemble.h"
#include "vp/lm/model.h"
#include "vp/memlab/canary.h"
#include "vp/pipeline/config.h"
#include "vp/pipeline/report.h"

namespace vp {

struct ExtractionAttempt {
  std::size_t canary = 0;  // index into the evaluated canary list
  int repetition = 0;
  std::string decoded;
  TokenSeq prefix_tokens;
  TokenSeq tokens;
  TraceSeq traces;
  bool success = false;
};

struct RepetitionRate {
  int repetition = 0;
  std::size_t n = 0;
  std::size_t successes = 0;
  double rate() const {
    return n == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(n);
  }
};

// Greedy-decodes |secret| tokens after each prefix; success iff the decoded
// text equals the secret.
std::vector<ExtractionAttempt> AttemptExtractions(
    const LanguageModel& model, const std::vector<CanarySpec>& canaries,
    int workers = 1);

std::vector<RepetitionRate> SuccessByRepetition(
    const std::vector<ExtractionAttempt>& attempts);

struct MiaValidation {
  ReportTable table;  // one row per method plus "bow"
  std::size_t correct = 0;
  std::size_t incorrect = 0;
};

struct MiaOptions {
  std::vector<std::string> methods;
  ScoreConfig scores;
  EnsembleEvalOptions bow;
  double bow_min_doc_fraction = 0.05;
  bool shuffle_labels = false;  // permutation control
  std::uint64_t seed = 0;
  int workers = 1;
};

// Scores (prefix, decoded continuation) for every attempt; labels are
// digit-exact success. The ReCaLL family uses `prefix_set` when given.
MiaValidation ValidateWithMias(const LanguageModel& model,
                               const std::vector<CanarySpec>& canaries,
                               const std::vector<ExtractionAttempt>& attempts,
                               const ReferencePrefixSet* prefix_set,
                               const MiaOptions& options);

struct LabSeedResult {
  std::uint64_t seed = 0;
  std::vector<RepetitionRate> rates;
  std::size_t control_successes = 0;
  std::size_t controls = 0;
  MiaValidation mia;
  bool monotone() const;
};

struct LabOutcome {
  std::vector<LabSeedResult> seeds;
  ReportTable extraction;  // rows per repetition level, incl. x0 control
  ReportTable mia;         // rows per method, mean over seeds
};

// Canary corpus per seed, order-n byte model trained on it, extraction
// success by repetition, repetition-0 controls and MIA validation.
LabOutcome RunLab(const RunConfig& config);

}  // namespace vp

#endif  // VP_MEMLAB_LAB_H_
