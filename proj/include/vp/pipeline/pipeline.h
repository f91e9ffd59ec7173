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
#ifndef VP_PIPELINE_PIPELINE_H_
#define VP_PIPELINE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vp/core/artifact.h"
#include "vp/core/types.h"
#include "vp/lm/model.h"
#include "vp/lm/prefix_set.h"
#include "vp/lm/trace_cache.h"
#include "vp/pipeline/config.h"
#include "vp/pipeline/report.h"
#include "vp/scores/registry.h"

namespace vp {

// Everything a run needs: configuration, the (cached) model, the examples
// with resolved tokens and the optional reference prefix set.
struct Pipeline {
  RunConfig config;
  std::shared_ptr<CachedModel> model;
  std::vector<ExtractionExample> examples;
  std::optional<ReferencePrefixSet> prefix_set;

  const ExtractionExample& Example(const std::string& id) const;
};

std::shared_ptr<const LanguageModel> MakeModel(const ModelConfig& config);

// Builds the model and loads data named by the config.
Pipeline OpenPipeline(RunConfig config);

// Uses the given model and examples instead of the config's [model] and
// [data] sections.
Pipeline OpenPipeline(RunConfig config,
                      std::shared_ptr<const LanguageModel> model,
                      std::vector<ExtractionExample> examples,
                      std::optional<ReferencePrefixSet> prefix_set = {});

// Enabled scores defined in `mode`, minus the ReCaLL family when the
// pipeline has no reference prefix set.
std::vector<std::string> UsableScores(const Pipeline& p, ScoreMode mode);

// Sampling settings for one example: seeded with `seed`, length from the
// config or the true suffix.
GenerationConfig ExampleGeneration(const RunConfig& config,
                                   const ExtractionExample& example,
                                   std::uint64_t seed);

// Candidates for every example, grouped in example order.
std::vector<std::vector<ScoredCandidate>> GeneratePools(const Pipeline& p,
                                                        std::uint64_t seed);

// Fills `names` scores on every candidate (suffix-only, per-prefix batch
// mean). Returns the number of candidate scores that failed.
std::size_t ScorePools(const Pipeline& p,
                       std::vector<std::vector<ScoredCandidate>>& pools,
                       const ScoreConfig& config,
                       const std::vector<std::string>& names);

struct RankingResult {
  std::string example_id;
  std::vector<ScoredCandidate> ranked;
  bool exact_match = false;

  const ScoredCandidate* top1() const {
    return ranked.empty() ? nullptr : &ranked.front();
  }
};

// Sorts by `ranker` descending; ties and candidates lacking the score keep
// ascending gen_index order, the latter after all scored candidates.
RankingResult RankPool(const std::vector<ScoredCandidate>& pool,
                       const std::string& ranker, const TokenSeq& truth);

// "mp/<r>", "mh_count/<r>", "mh_normalized/<r>" for each ranker over the
// candidates in `records` (grouped by example id).
std::map<std::string, double> RankingMetrics(
    const std::vector<ScoredCandidate>& records,
    const std::vector<ExtractionExample>& examples,
    const std::vector<std::string>& rankers);

// Exact-match labels of the likelihood-ranked top-1 per example.
std::map<std::string, bool> LikelihoodLabels(
    const std::vector<ScoredCandidate>& records,
    const std::vector<ExtractionExample>& examples);

struct RankingOutcome {
  ReportTable table;  // mean over trials
  std::vector<RunArtifact> trials;
  std::vector<std::filesystem::path> artifact_dirs;
};

// Rankers default to the enabled scores. Artifacts are written under
// `out_dir` (if nonempty) as trial_<t> before aggregation.
RankingOutcome RunRanking(const Pipeline& p,
                          std::vector<std::string> rankers = {},
                          const std::filesystem::path& out_dir = {});

// Mean of per-trial "<metric>/<method>" values.
ReportTable AggregateTrials(const std::vector<RunArtifact>& trials,
                            const std::vector<std::string>& methods,
                            std::string name);

struct ConfirmationItem {
  ScoredCandidate top1;  // scores of the requested mode
  bool label = false;
};

struct ConfirmationSet {
  ScoreMode mode = ScoreMode::kSuffixOnly;
  std::vector<ConfirmationItem> items;
  std::size_t members() const;
  std::size_t nonmembers() const;
};

// Likelihood-ranked top-1 per example, labelled by exact match and scored
// with `names` in `mode`. `pools` must carry likelihood scores.
ConfirmationSet BuildConfirmationSet(
    const Pipeline& p, const std::vector<std::vector<ScoredCandidate>>& pools,
    const ScoreConfig& config, ScoreMode mode,
    const std::vector<std::string>& names);

// Throws Error(kMetric) naming the class counts if a class is missing.
void RequireBothClasses(const ConfirmationSet& set);

// "auroc/<m>", "tpr_at_05fpr/<m>", "fpr_at_95tpr/<m>" per method; items
// lacking a method's score are left out of that method and counted in
// "dropped/<m>".
std::map<std::string, double> ConfirmationMetrics(
    const ConfirmationSet& set, const std::vector<std::string>& methods);

struct ConfirmationOutcome {
  std::vector<ReportTable> tables;  // one per mode
  std::vector<ConfirmationSet> sets;
  std::vector<RunArtifact> artifacts;
};

ConfirmationOutcome RunConfirmation(const Pipeline& p,
                                    const std::filesystem::path& out_dir = {});

struct SweepOutcome {
  ReportTable table;  // keys (value, method)
  std::string plot_json;
  std::uint64_t calls_after_first_value = 0;
};

SweepOutcome RunSweep(const Pipeline& p,
                      const std::filesystem::path& out_dir = {});

// Sets one sweepable ScoreConfig field by name.
void SetSweepAxis(ScoreConfig& config, const std::string& axis, double value);

}  // namespace vp

#endif  // VP_PIPELINE_PIPELINE_H_
