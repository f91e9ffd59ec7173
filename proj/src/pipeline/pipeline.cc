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
#include "vp/pipeline/pipeline.h"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "vp/core/dataset.h"
#include "vp/core/error.h"
#include "vp/core/parallel.h"
#include "vp/eval/metrics.h"
#include "vp/generation/generator.h"
#include "vp/lm/ngram.h"
#include "vp/lm/remote.h"
#include "vp/scores/scores.h"

namespace vp {
namespace {

namespace fs = std::filesystem;

const std::string kLikelihoodName(kLikelihood);

std::vector<std::string> PrefixSetScores(const std::vector<std::string>& names,
                                         const Pipeline& p) {
  // Without a prefix set the ReCaLL family cannot run; drop it up front
  // instead of failing every candidate.
  if (p.prefix_set) return names;
  std::vector<std::string> out;
  for (const std::string& n : names) {
    if ((FindScore(n).requirements & (kNeedNonMember | kNeedMember)) == 0) {
      out.push_back(n);
    }
  }
  return out;
}

std::vector<std::vector<ScoredCandidate>> GroupRecords(
    const std::vector<ScoredCandidate>& records,
    const std::vector<ExtractionExample>& examples) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < examples.size(); ++i) index[examples[i].id] = i;
  std::vector<std::vector<ScoredCandidate>> pools(examples.size());
  for (const ScoredCandidate& c : records) {
    const auto it = index.find(c.example_id);
    if (it == index.end()) {
      Fail(ErrorKind::kInput,
           fmt::format("record references unknown example '{}'", c.example_id));
    }
    pools[it->second].push_back(c);
  }
  return pools;
}

}  // namespace

const ExtractionExample& Pipeline::Example(const std::string& id) const {
  for (const ExtractionExample& e : examples) {
    if (e.id == id) return e;
  }
  Fail(ErrorKind::kInput, fmt::format("unknown example '{}'", id));
}

std::shared_ptr<const LanguageModel> MakeModel(const ModelConfig& config) {
  if (config.kind == "remote") {
    RemoteOptions options;
    options.endpoint = config.endpoint;
    options.auth_token = config.auth_token;
    options.timeout = std::chrono::milliseconds(config.timeout_ms);
    options.max_inflight = config.max_inflight;
    return std::make_shared<RemoteModel>(std::move(options));
  }
  if (!config.path.empty()) return NGramModel::Load(config.path, "ngram");
  if (config.corpus.empty()) {
    Fail(ErrorKind::kConfig, "model: reference models need path or corpus");
  }
  return TrainByteNGram(LoadTextCorpus(config.corpus), config.ngram_order,
                        config.ngram_lambda,
                        fmt::format("ngram-{}", config.ngram_order));
}

Pipeline OpenPipeline(RunConfig config) {
  std::shared_ptr<const LanguageModel> model = MakeModel(config.model);
  if (config.data.examples.empty()) {
    Fail(ErrorKind::kConfig, "data.examples is required");
  }
  std::vector<ExtractionExample> examples = LoadExamples(config.data.examples);
  std::optional<ReferencePrefixSet> prefixes;
  if (!config.data.member_prefixes.empty() &&
      !config.data.nonmember_prefixes.empty()) {
    prefixes = LoadPrefixSet(config.data.member_prefixes,
                             config.data.nonmember_prefixes, *model,
                             static_cast<std::size_t>(config.scores.recall_prefix_len));
  }
  return OpenPipeline(std::move(config), std::move(model), std::move(examples),
                      std::move(prefixes));
}

Pipeline OpenPipeline(RunConfig config,
                      std::shared_ptr<const LanguageModel> model,
                      std::vector<ExtractionExample> examples,
                      std::optional<ReferencePrefixSet> prefix_set) {
  config.Validate();
  if (examples.empty()) Fail(ErrorKind::kInput, "no examples to run");
  ResolveTokens(examples, *model);
  Pipeline p;
  p.model = std::make_shared<CachedModel>(std::move(model),
                                          config.model.cache_capacity);
  p.config = std::move(config);
  p.examples = std::move(examples);
  p.prefix_set = std::move(prefix_set);
  return p;
}

std::vector<std::string> UsableScores(const Pipeline& p, ScoreMode mode) {
  return PrefixSetScores(ScoresForMode(p.config.enabled_scores, mode), p);
}

GenerationConfig ExampleGeneration(const RunConfig& config,
                                   const ExtractionExample& example,
                                   std::uint64_t seed) {
  GenerationConfig g = config.generation.sampling;
  g.seed = seed;
  g.max_new_tokens = config.generation.max_new_tokens > 0
                         ? config.generation.max_new_tokens
                         : static_cast<int>(example.suffix_tokens.size());
  return g;
}

std::vector<std::vector<ScoredCandidate>> GeneratePools(const Pipeline& p,
                                                        std::uint64_t seed) {
  std::vector<std::vector<ScoredCandidate>> pools(p.examples.size());
  ParallelFor(p.examples.size(), p.config.workers, [&](std::size_t i) {
    const ExtractionExample& e = p.examples[i];
    pools[i] = GenerateCandidates(*p.model, e, ExampleGeneration(p.config, e, seed));
  });
  return pools;
}

std::size_t ScorePools(const Pipeline& p,
                       std::vector<std::vector<ScoredCandidate>>& pools,
                       const ScoreConfig& config,
                       const std::vector<std::string>& names) {
  const std::vector<std::string> usable = PrefixSetScores(names, p);
  const ReferencePrefixSet* prefixes = p.prefix_set ? &*p.prefix_set : nullptr;
  std::vector<std::size_t> failures(pools.size(), 0);
  ParallelFor(pools.size(), p.config.workers, [&](std::size_t i) {
    const double batch_mean = BatchMeanLogprob(pools[i]);
    for (ScoredCandidate& c : pools[i]) {
      ScoreOutcome out =
          ComputeAllScores(*p.model, p.examples[i], c, config, prefixes,
                           ScoreMode::kSuffixOnly, usable, batch_mean);
      failures[i] += out.errors.size();
      for (auto& [name, value] : out.scores) c.scores[name] = value;
    }
  });
  std::size_t total = 0;
  for (std::size_t f : failures) total += f;
  return total;
}

RankingResult RankPool(const std::vector<ScoredCandidate>& pool,
                       const std::string& ranker, const TokenSeq& truth) {
  RankingResult r;
  r.ranked = pool;
  std::stable_sort(r.ranked.begin(), r.ranked.end(),
                   [&](const ScoredCandidate& a, const ScoredCandidate& b) {
                     const auto ia = a.scores.find(ranker);
                     const auto ib = b.scores.find(ranker);
                     const bool ha = ia != a.scores.end();
                     const bool hb = ib != b.scores.end();
                     if (ha != hb) return ha;
                     if (ha && ia->second != ib->second) {
                       return ia->second > ib->second;
                     }
                     return a.gen_index < b.gen_index;
                   });
  if (!r.ranked.empty()) {
    r.example_id = r.ranked.front().example_id;
    r.exact_match = r.ranked.front().tokens == truth;
  }
  return r;
}

std::map<std::string, double> RankingMetrics(
    const std::vector<ScoredCandidate>& records,
    const std::vector<ExtractionExample>& examples,
    const std::vector<std::string>& rankers) {
  const auto pools = GroupRecords(records, examples);
  std::map<std::string, double> metrics;
  for (const std::string& ranker : rankers) {
    SequenceMap top1, truth;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      const RankingResult r = RankPool(pools[i], ranker, examples[i].suffix_tokens);
      top1[examples[i].id] = r.top1() ? r.top1()->tokens : TokenSeq{};
      truth[examples[i].id] = examples[i].suffix_tokens;
    }
    const HammingResult mh = HammingMh(top1, truth);
    metrics[std::string(kMetricMp) + "/" + ranker] = PrecisionMp(top1, truth);
    metrics[std::string(kMetricMhCount) + "/" + ranker] = mh.count;
    metrics[std::string(kMetricMhNormalized) + "/" + ranker] = mh.normalized;
  }
  return metrics;
}

std::map<std::string, bool> LikelihoodLabels(
    const std::vector<ScoredCandidate>& records,
    const std::vector<ExtractionExample>& examples) {
  const auto pools = GroupRecords(records, examples);
  std::map<std::string, bool> labels;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    labels[examples[i].id] =
        RankPool(pools[i], kLikelihoodName, examples[i].suffix_tokens).exact_match;
  }
  return labels;
}

ReportTable AggregateTrials(const std::vector<RunArtifact>& trials,
                            const std::vector<std::string>& methods,
                            std::string name) {
  std::map<std::string, double> sums;
  std::map<std::string, std::size_t> counts;
  for (const RunArtifact& t : trials) {
    for (const auto& [k, v] : t.metrics) {
      sums[k] += v;
      ++counts[k];
    }
  }
  for (auto& [k, v] : sums) v /= static_cast<double>(counts[k]);
  return MethodTable(std::move(name), sums, methods);
}

RankingOutcome RunRanking(const Pipeline& p, std::vector<std::string> rankers,
                          const fs::path& out_dir) {
  if (rankers.empty()) rankers = p.config.enabled_scores;
  for (const std::string& r : rankers) FindScore(r);
  std::vector<std::string> needed = rankers;
  if (std::find(needed.begin(), needed.end(), kLikelihoodName) == needed.end()) {
    needed.push_back(kLikelihoodName);  // labels
  }
  RankingOutcome out;
  const std::string snapshot = SnapshotToml(p.config);
  for (int t = 0; t < p.config.generation.trials; ++t) {
    const std::uint64_t seed = p.config.seed() ^ static_cast<std::uint64_t>(t);
    auto pools = GeneratePools(p, seed);
    const std::size_t failures = ScorePools(p, pools, p.config.scores, needed);
    RunArtifact a;
    a.run_id = fmt::format("rank-{}-trial{}", p.config.seed(), t);
    a.config_snapshot = snapshot;
    a.seed = seed;
    for (auto& pool : pools) {
      for (auto& c : pool) a.records.push_back(std::move(c));
    }
    a.labels = LikelihoodLabels(a.records, p.examples);
    CheckLabelsCover(a);
    a.metrics = RankingMetrics(a.records, p.examples, rankers);
    a.metrics["score_failures"] = static_cast<double>(failures);
    if (!out_dir.empty()) {
      const fs::path dir = out_dir / fmt::format("trial_{}", t);
      SaveArtifact(a, dir);
      out.artifact_dirs.push_back(dir);
    }
    out.trials.push_back(std::move(a));
  }
  out.table = AggregateTrials(out.trials, rankers, "ranking");
  out.table.notes.push_back(fmt::format("mean over {} trial(s), {} examples",
                                        out.trials.size(), p.examples.size()));
  return out;
}

std::size_t ConfirmationSet::members() const {
  return static_cast<std::size_t>(std::count_if(
      items.begin(), items.end(), [](const ConfirmationItem& i) { return i.label; }));
}

std::size_t ConfirmationSet::nonmembers() const {
  return items.size() - members();
}

ConfirmationSet BuildConfirmationSet(
    const Pipeline& p, const std::vector<std::vector<ScoredCandidate>>& pools,
    const ScoreConfig& config, ScoreMode mode,
    const std::vector<std::string>& names) {
  const std::vector<std::string> usable = PrefixSetScores(names, p);
  const ReferencePrefixSet* prefixes = p.prefix_set ? &*p.prefix_set : nullptr;
  ConfirmationSet set;
  set.mode = mode;
  set.items.resize(p.examples.size());
  std::vector<bool> present(p.examples.size(), false);
  ParallelFor(p.examples.size(), p.config.workers, [&](std::size_t i) {
    const ExtractionExample& e = p.examples[i];
    const RankingResult r = RankPool(pools[i], kLikelihoodName, e.suffix_tokens);
    if (r.top1() == nullptr) return;
    ScoredCandidate top = *r.top1();
    top.scores.clear();
    const ScoreOutcome scored =
        ComputeAllScores(*p.model, e, top, config, prefixes, mode, usable,
                         BatchMeanLogprob(pools[i]));
    top.scores = scored.scores;
    set.items[i] = {std::move(top), r.exact_match};
    present[i] = true;
  });
  std::vector<ConfirmationItem> kept;
  for (std::size_t i = 0; i < set.items.size(); ++i) {
    if (present[i]) kept.push_back(std::move(set.items[i]));
  }
  set.items = std::move(kept);
  return set;
}

void RequireBothClasses(const ConfirmationSet& set) {
  if (set.members() == 0 || set.nonmembers() == 0) {
    Fail(ErrorKind::kMetric,
         fmt::format("confirmation set ({}) has {} true extractions and {} "
                     "false ones; both classes are required",
                     ScoreModeName(set.mode), set.members(), set.nonmembers()));
  }
}

std::map<std::string, double> ConfirmationMetrics(
    const ConfirmationSet& set, const std::vector<std::string>& methods) {
  RequireBothClasses(set);
  std::map<std::string, double> metrics;
  for (const std::string& m : methods) {
    std::vector<double> scores;
    std::vector<bool> labels;
    for (const ConfirmationItem& item : set.items) {
      const auto it = item.top1.scores.find(m);
      if (it == item.top1.scores.end()) continue;
      scores.push_back(it->second);
      labels.push_back(item.label);
    }
    const std::size_t dropped = set.items.size() - scores.size();
    if (dropped > 0) metrics["dropped/" + m] = static_cast<double>(dropped);
    const auto pos = std::count(labels.begin(), labels.end(), true);
    if (pos == 0 || pos == static_cast<std::ptrdiff_t>(labels.size())) continue;
    const ClassifierMetrics cm = ComputeClassifierMetrics(scores, labels);
    metrics[std::string(kMetricAuroc) + "/" + m] = cm.auroc;
    metrics[std::string(kMetricTpr) + "/" + m] = cm.tpr_at_05fpr;
    metrics[std::string(kMetricFpr) + "/" + m] = cm.fpr_at_95tpr;
  }
  return metrics;
}

ConfirmationOutcome RunConfirmation(const Pipeline& p, const fs::path& out_dir) {
  ConfirmationOutcome out;
  const std::uint64_t seed = p.config.seed();
  auto pools = GeneratePools(p, seed);
  ScorePools(p, pools, p.config.scores, {kLikelihoodName});
  const std::string snapshot = SnapshotToml(p.config);
  for (ScoreMode mode : p.config.ConfirmationModes()) {
    const std::vector<std::string> methods = UsableScores(p, mode);
    ConfirmationSet set =
        BuildConfirmationSet(p, pools, p.config.scores, mode, methods);
    RunArtifact a;
    a.run_id = fmt::format("confirm-{}-{}", seed, ScoreModeName(mode));
    a.config_snapshot = snapshot;
    a.seed = seed;
    for (const ConfirmationItem& item : set.items) {
      a.records.push_back(item.top1);
      a.labels[item.top1.example_id] = item.label;
    }
    CheckLabelsCover(a);
    a.metrics = ConfirmationMetrics(set, methods);
    a.metrics["members"] = static_cast<double>(set.members());
    a.metrics["nonmembers"] = static_cast<double>(set.nonmembers());
    ReportTable table = MethodTable(
        fmt::format("confirm_{}", ScoreModeName(mode)), a.metrics, methods);
    table.notes.push_back(fmt::format("{} true extractions, {} false",
                                      set.members(), set.nonmembers()));
    for (const std::string& m : methods) {
      const auto it = a.metrics.find("dropped/" + m);
      if (it != a.metrics.end()) {
        table.notes.push_back(
            fmt::format("{}: {} item(s) dropped for a missing score", m, it->second));
      }
    }
    if (!out_dir.empty()) SaveArtifact(a, out_dir / ScoreModeName(mode));
    out.tables.push_back(std::move(table));
    out.sets.push_back(std::move(set));
    out.artifacts.push_back(std::move(a));
  }
  return out;
}

void SetSweepAxis(ScoreConfig& config, const std::string& axis, double value) {
  if (axis == "min_k_fraction") {
    config.min_k_fraction = value;
  } else if (axis == "surp_low_threshold") {
    config.surp_low_threshold = value;
  } else if (axis == "recall_num_prefixes") {
    if (value != std::floor(value)) {
      Fail(ErrorKind::kConfig,
           fmt::format("sweep value {} for recall_num_prefixes is not an integer",
                       value));
    }
    config.recall_num_prefixes = static_cast<int>(value);
  } else {
    Fail(ErrorKind::kConfig, fmt::format("sweep.axis '{}' is not sweepable", axis));
  }
  config.Validate();
}

SweepOutcome RunSweep(const Pipeline& p, const fs::path& out_dir) {
  const std::string& axis = p.config.sweep.axis;
  for (double v : p.config.sweep.values) {
    ScoreConfig probe = p.config.scores;
    SetSweepAxis(probe, axis, v);
  }
  auto pools = GeneratePools(p, p.config.seed());
  ScorePools(p, pools, p.config.scores, {kLikelihoodName});
  const std::vector<std::string> methods =
      UsableScores(p, ScoreMode::kSuffixOnly);

  SweepOutcome out;
  out.table.name = "sweep_" + axis;
  out.table.key_columns = {axis, "method"};
  out.table.value_columns = {kMetricAuroc, kMetricTpr, kMetricFpr};
  std::uint64_t calls_mark = 0;
  for (std::size_t vi = 0; vi < p.config.sweep.values.size(); ++vi) {
    const double value = p.config.sweep.values[vi];
    ScoreConfig config = p.config.scores;
    SetSweepAxis(config, axis, value);
    const ConfirmationSet set =
        BuildConfirmationSet(p, pools, config, ScoreMode::kSuffixOnly, methods);
    const auto metrics = ConfirmationMetrics(set, methods);
    for (const std::string& m : methods) {
      ReportTable::Row row{{fmt::format("{}", value), m}, {}};
      for (const std::string& c : out.table.value_columns) {
        const auto it = metrics.find(c + "/" + m);
        row.values.push_back(it == metrics.end() ? std::nan("") : it->second);
      }
      out.table.rows.push_back(std::move(row));
    }
    if (vi == 0) calls_mark = p.model->inner_calls();
  }
  out.calls_after_first_value = p.model->inner_calls() - calls_mark;
  out.plot_json = FormatPlotSeries(out.table, axis, kMetricAuroc);
  if (!out_dir.empty()) {
    RunArtifact a;
    a.run_id = fmt::format("sweep-{}-{}", p.config.seed(), axis);
    a.config_snapshot = SnapshotToml(p.config);
    a.seed = p.config.seed();
    SaveArtifact(a, out_dir);
  }
  return out;
}

}  // namespace vp
