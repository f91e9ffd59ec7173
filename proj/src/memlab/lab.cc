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
#include "vp/memlab/lab.h"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "vp/core/error.h"
#include "vp/core/parallel.h"
#include "vp/eval/metrics.h"
#include "vp/generation/generator.h"
#include "vp/lm/ngram.h"
#include "vp/lm/prefix_set.h"
#include "vp/scores/registry.h"

namespace vp {

std::vector<ExtractionAttempt> AttemptExtractions(
    const LanguageModel& model, const std::vector<CanarySpec>& canaries,
    int workers) {
  std::vector<ExtractionAttempt> attempts(canaries.size());
  ParallelFor(canaries.size(), workers, [&](std::size_t i) {
    const CanarySpec& c = canaries[i];
    ExtractionAttempt& a = attempts[i];
    a.canary = i;
    a.repetition = c.repetition;
    a.prefix_tokens = model.Tokenize(c.prefix_text);
    const int length = static_cast<int>(model.Tokenize(c.secret).size());
    GeneratedSequence out = GreedyDecode(model, a.prefix_tokens, length);
    a.tokens = std::move(out.tokens);
    a.traces = std::move(out.traces);
    a.decoded = model.Detokenize(a.tokens);
    a.success = a.decoded == c.secret;
  });
  return attempts;
}

std::vector<RepetitionRate> SuccessByRepetition(
    const std::vector<ExtractionAttempt>& attempts) {
  std::map<int, RepetitionRate> by_rep;
  for (const ExtractionAttempt& a : attempts) {
    RepetitionRate& r = by_rep[a.repetition];
    r.repetition = a.repetition;
    ++r.n;
    if (a.success) ++r.successes;
  }
  std::vector<RepetitionRate> out;
  for (const auto& [rep, r] : by_rep) out.push_back(r);
  return out;
}

MiaValidation ValidateWithMias(const LanguageModel& model,
                               const std::vector<CanarySpec>& canaries,
                               const std::vector<ExtractionAttempt>& attempts,
                               const ReferencePrefixSet* prefix_set,
                               const MiaOptions& options) {
  MiaValidation v;
  std::vector<bool> labels;
  for (const ExtractionAttempt& a : attempts) {
    labels.push_back(a.success);
    (a.success ? v.correct : v.incorrect)++;
  }
  if (v.correct == 0 || v.incorrect == 0) {
    Fail(ErrorKind::kMetric,
         fmt::format("MIA validation needs correct and incorrect extractions "
                     "(correct {}, incorrect {})",
                     v.correct, v.incorrect));
  }
  if (options.shuffle_labels) {
    Rng rng = SeededRng(options.seed, "label-shuffle");
    // Shuffle a copy through a plain buffer; vector<bool> has no span.
    std::vector<char> buf(labels.begin(), labels.end());
    rng.Shuffle(std::span<char>(buf));
    labels.assign(buf.begin(), buf.end());
  }

  // One greedy continuation per prefix, so the High-Confidence baseline is
  // the mean over all attempts.
  std::vector<ScoredCandidate> batch;
  for (const ExtractionAttempt& a : attempts) {
    ScoredCandidate c;
    c.example_id = fmt::format("canary-{}", a.canary);
    c.tokens = a.tokens;
    c.traces = a.traces;
    batch.push_back(std::move(c));
  }
  const double batch_mean = BatchMeanLogprob(batch);
  std::vector<std::map<std::string, double>> scores(attempts.size());
  ParallelFor(attempts.size(), options.workers, [&](std::size_t i) {
    const ExtractionAttempt& a = attempts[i];
    ExtractionExample ex;
    ex.id = batch[i].example_id;
    ex.prefix_tokens = a.prefix_tokens;
    ex.suffix_tokens = a.tokens;
    ex.prefix_text = canaries[a.canary].prefix_text;
    scores[i] = ComputeAllScores(model, ex, batch[i], options.scores, prefix_set,
                                 ScoreMode::kSuffixOnly, options.methods,
                                 batch_mean)
                    .scores;
  });

  v.table.name = "lab_mia";
  v.table.key_columns = {"method"};
  v.table.value_columns = {kMetricAuroc, kMetricTpr, kMetricFpr};
  for (const std::string& m : options.methods) {
    std::vector<double> s;
    std::vector<bool> l;
    for (std::size_t i = 0; i < attempts.size(); ++i) {
      const auto it = scores[i].find(m);
      if (it == scores[i].end()) continue;
      s.push_back(it->second);
      l.push_back(labels[i]);
    }
    const auto pos = std::count(l.begin(), l.end(), true);
    if (pos == 0 || pos == static_cast<std::ptrdiff_t>(l.size())) {
      v.table.notes.push_back(fmt::format("{}: no score for one class", m));
      continue;
    }
    if (s.size() < attempts.size()) {
      v.table.notes.push_back(fmt::format("{}: {} attempt(s) dropped", m,
                                          attempts.size() - s.size()));
    }
    const ClassifierMetrics cm = ComputeClassifierMetrics(s, l);
    v.table.rows.push_back({{m}, {cm.auroc, cm.tpr_at_05fpr, cm.fpr_at_95tpr}});
  }
  std::vector<std::string> texts;
  for (const ExtractionAttempt& a : attempts) {
    texts.push_back(canaries[a.canary].prefix_text + a.decoded);
  }
  Rng bow_rng = SeededRng(options.seed, "bow");
  const ReportTable bow = EvaluateBow(texts, labels, options.bow_min_doc_fraction,
                                      options.bow, bow_rng);
  v.table.rows.push_back(bow.rows.front());
  v.table.notes.push_back(fmt::format("{} correct, {} incorrect extractions",
                                      v.correct, v.incorrect));
  return v;
}

bool LabSeedResult::monotone() const {
  for (std::size_t i = 1; i < rates.size(); ++i) {
    if (rates[i].rate() < rates[i - 1].rate()) return false;
  }
  return true;
}

LabOutcome RunLab(const RunConfig& config) {
  const LabConfig& lab = config.lab;
  DeskMailStyle style;
  style.name_pool = lab.name_pool;
  style.contact_names = lab.contact_names;
  style.phone_lines_per_doc = lab.phone_lines_per_doc;
  CanaryLayout layout;
  layout.n_background = lab.background;
  layout.counts = lab.layout;
  layout.secret_len = lab.secret_len;
  const BackgroundGenerator background = DeskBackground(style);
  const CanaryTemplate frame = DeskCanaryTemplate(style);

  EnsembleEvalOptions bow;
  bow.kind = "random_forest";
  bow.forest = {config.ensemble.trees, config.ensemble.max_depth,
                config.ensemble.min_leaf, config.workers};
  bow.repeats = config.ensemble.repeats;
  bow.test_fraction = config.ensemble.test_fraction;

  LabOutcome out;
  for (std::uint64_t seed : lab.seeds) {
    LabSeedResult r;
    r.seed = seed;
    const CanaryCorpus corpus = BuildCanaryCorpus(layout, background, frame, seed);
    const auto model = TrainByteNGram(corpus.documents, lab.ngram_order, {},
                                      fmt::format("lab-ngram-{}", lab.ngram_order));
    const auto attempts = AttemptExtractions(*model, corpus.canaries, config.workers);
    r.rates = SuccessByRepetition(attempts);

    const auto controls = MakeControls(corpus, frame, lab.controls, seed);
    const auto control_attempts = AttemptExtractions(*model, controls, config.workers);
    r.controls = controls.size();
    for (const ExtractionAttempt& a : control_attempts) {
      if (a.success) ++r.control_successes;
    }

    // Members: planted background mails. Non-members: fresh mails from the
    // same generator under another stream.
    const std::size_t n_ref = static_cast<std::size_t>(
        std::max(8, config.scores.recall_num_prefixes));
    std::vector<std::string> members(
        corpus.background.begin(),
        corpus.background.begin() +
            static_cast<std::ptrdiff_t>(std::min(n_ref, corpus.background.size())));
    std::vector<std::string> nonmembers;
    Rng fresh = SeededRng(seed, "nonmember-mail");
    for (std::size_t i = 0; i < n_ref; ++i) nonmembers.push_back(background(fresh, i));
    const ReferencePrefixSet prefixes = MakePrefixSet(
        members, nonmembers, *model,
        static_cast<std::size_t>(config.scores.recall_prefix_len));

    MiaOptions mia;
    mia.methods = ScoresForMode(config.enabled_scores, ScoreMode::kSuffixOnly);
    mia.scores = config.scores;
    mia.bow = bow;
    mia.bow_min_doc_fraction = config.ensemble.bow_min_doc_fraction;
    mia.seed = seed;
    mia.workers = config.workers;
    r.mia = ValidateWithMias(*model, corpus.canaries, attempts, &prefixes, mia);
    out.seeds.push_back(std::move(r));
  }

  // Extraction table: one row per repetition level, then the control arm.
  ReportTable& ex = out.extraction;
  ex.name = "lab_extraction";
  ex.key_columns = {"repetition"};
  ex.value_columns = {"canaries", "success_rate"};
  for (const LabSeedResult& r : out.seeds) {
    ex.value_columns.push_back(fmt::format("rate_seed{}", r.seed));
  }
  const std::size_t levels = out.seeds.empty() ? 0 : out.seeds.front().rates.size();
  for (std::size_t li = 0; li < levels; ++li) {
    ReportTable::Row row{{fmt::format("x{}", out.seeds.front().rates[li].repetition)}, {}};
    row.values.push_back(static_cast<double>(out.seeds.front().rates[li].n));
    double sum = 0.0;
    for (const LabSeedResult& r : out.seeds) sum += r.rates[li].rate();
    row.values.push_back(sum / static_cast<double>(out.seeds.size()));
    for (const LabSeedResult& r : out.seeds) row.values.push_back(r.rates[li].rate());
    ex.rows.push_back(std::move(row));
  }
  {
    ReportTable::Row row{{"x0"}, {}};
    row.values.push_back(static_cast<double>(lab.controls));
    double sum = 0.0;
    std::vector<double> per_seed;
    for (const LabSeedResult& r : out.seeds) {
      const double rate = r.controls == 0 ? 0.0
                                          : static_cast<double>(r.control_successes) /
                                                static_cast<double>(r.controls);
      sum += rate;
      per_seed.push_back(rate);
    }
    row.values.push_back(sum / static_cast<double>(std::max<std::size_t>(out.seeds.size(), 1)));
    row.values.insert(row.values.end(), per_seed.begin(), per_seed.end());
    ex.rows.push_back(std::move(row));
  }
  std::size_t monotone = 0;
  for (const LabSeedResult& r : out.seeds) monotone += r.monotone() ? 1 : 0;
  ex.notes.push_back(fmt::format(
      "order-{} byte n-gram, greedy decoding; success rate non-decreasing in "
      "repetition for {} of {} seeds; x0 rows are never-planted controls",
      lab.ngram_order, monotone, out.seeds.size()));

  // MIA table: mean over seeds per method.
  ReportTable& mt = out.mia;
  mt.name = "lab_mia";
  mt.key_columns = {"method"};
  mt.value_columns = {kMetricAuroc, kMetricTpr, kMetricFpr};
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::size_t>> sums;
  for (const LabSeedResult& r : out.seeds) {
    for (const ReportTable::Row& row : r.mia.table.rows) {
      const std::string& m = row.keys.front();
      if (!sums.contains(m)) {
        order.push_back(m);
        sums[m].first.assign(row.values.size(), 0.0);
      }
      for (std::size_t i = 0; i < row.values.size(); ++i) {
        sums[m].first[i] += row.values[i];
      }
      ++sums[m].second;
    }
  }
  for (const std::string& m : order) {
    ReportTable::Row row{{m}, sums[m].first};
    for (double& v : row.values) v /= static_cast<double>(sums[m].second);
    mt.rows.push_back(std::move(row));
    if (sums[m].second < out.seeds.size()) {
      mt.notes.push_back(fmt::format("{}: averaged over {} of {} seeds", m,
                                     sums[m].second, out.seeds.size()));
    }
  }
  mt.notes.push_back("labels: digit-exact extraction success; bow is a random "
                     "forest over unigram presence of prefix plus decoded text");
  return out;
}

}  // namespace vp
