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
#include "vp/scores/registry.h"

#include <cmath>
#include <set>

#include <fmt/core.h>

#include "vp/core/error.h"

namespace vp {
namespace {

const std::vector<ScoreDef> kRegistry = {
    {kLikelihood, kNeedSuffix, true,
     [](const ScoreInput& in, const ScoreConfig&) { return ScoreLikelihood(in); }},
    {kZlib, kNeedSuffix | kNeedText, true,
     [](const ScoreInput& in, const ScoreConfig&) { return ScoreZlib(in); }},
    {kHighConf, kNeedSuffix | kNeedBatchMean, true,
     [](const ScoreInput& in, const ScoreConfig& c) {
       return ScoreHighConfidence(in, c);
     }},
    {kOutlier, kNeedSuffix, true,
     [](const ScoreInput& in, const ScoreConfig& c) {
       return ScoreOutlierRobust(in, c);
     }},
    {kSurp, kNeedSuffix, true,
     [](const ScoreInput& in, const ScoreConfig& c) { return ScoreSurp(in, c); }},
    {kRecall, kNeedNonMember | kNeedFullUncond, false,
     [](const ScoreInput& in, const ScoreConfig&) { return ScoreRecall(in); }},
    {kSRecall, kNeedSuffix | kNeedSuffixUncond, false,
     [](const ScoreInput& in, const ScoreConfig&) { return ScoreSRecall(in); }},
    {kConRecall, kNeedNonMember | kNeedMember | kNeedFullUncond, false,
     [](const ScoreInput& in, const ScoreConfig& c) {
       return ScoreConRecall(in, c);
     }},
    {kLowercase, kNeedSuffix | kNeedLowercase, false,
     [](const ScoreInput& in, const ScoreConfig&) { return ScoreLowercase(in); }},
    {kMinK, kNeedSuffix, true,
     [](const ScoreInput& in, const ScoreConfig& c) {
       return ScoreMinK(in, c.min_k_fraction);
     }},
    {kMinKpp, kNeedSuffix, true,
     [](const ScoreInput& in, const ScoreConfig& c) {
       return ScoreMinKpp(in, c.min_k_fraction);
     }},
};

TokenSeq Concat(const TokenSeq& a, const TokenSeq& b) {
  TokenSeq out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

std::string_view ScoreModeName(ScoreMode mode) {
  return mode == ScoreMode::kSuffixOnly ? "suffix_only" : "full_sequence";
}

ScoreMode ParseScoreMode(std::string_view name) {
  if (name == "suffix_only") return ScoreMode::kSuffixOnly;
  if (name == "full_sequence") return ScoreMode::kFullSequence;
  Fail(ErrorKind::kConfig,
       fmt::format("confirmation.mode '{}' is not suffix_only or full_sequence",
                   name));
}

const std::vector<ScoreDef>& ScoreRegistry() { return kRegistry; }

const ScoreDef& FindScore(std::string_view name) {
  for (const ScoreDef& def : kRegistry) {
    if (def.name == name) return def;
  }
  Fail(ErrorKind::kConfig, fmt::format("unknown score '{}'", name));
}

std::vector<std::string> AllScoreNames() {
  std::vector<std::string> out;
  for (const ScoreDef& def : kRegistry) out.emplace_back(def.name);
  return out;
}

std::vector<std::string> FullSequenceScoreNames() {
  std::vector<std::string> out;
  for (const ScoreDef& def : kRegistry) {
    if (def.full_sequence) out.emplace_back(def.name);
  }
  return out;
}

std::vector<std::string> ScoresForMode(const std::vector<std::string>& enabled,
                                       ScoreMode mode) {
  std::set<std::string_view> wanted;
  for (const std::string& name : enabled) wanted.insert(FindScore(name).name);
  std::vector<std::string> out;
  for (const ScoreDef& def : kRegistry) {
    if (!wanted.contains(def.name)) continue;
    if (mode == ScoreMode::kFullSequence && !def.full_sequence) continue;
    out.emplace_back(def.name);
  }
  return out;
}

unsigned CombinedRequirements(const std::vector<std::string>& names) {
  unsigned req = 0;
  for (const std::string& name : names) req |= FindScore(name).requirements;
  return req;
}

ScoreInput BuildScoreInput(const LanguageModel& model,
                           const ExtractionExample& example,
                           const ScoredCandidate& candidate,
                           const ScoreConfig& config,
                           const ReferencePrefixSet* prefix_set,
                           ScoreMode mode, unsigned req,
                           std::optional<double> batch_mean_logprob) {
  ScoreInput in;
  in.batch_mean_logprob = batch_mean_logprob;
  const TokenSeq& prefix = example.prefix_tokens;
  const TokenSeq& suffix = candidate.tokens;
  if (suffix.empty()) return in;
  const bool full = mode == ScoreMode::kFullSequence;
  const bool need_full_seq =
      full || (req & (kNeedNonMember | kNeedMember | kNeedFullUncond));
  const TokenSeq full_seq = need_full_seq ? Concat(prefix, suffix) : TokenSeq{};

  if (req & kNeedSuffix) {
    if (full) {
      in.suffix_traces = model.Trace({}, full_seq);
    } else if (candidate.traces.size() == suffix.size()) {
      in.suffix_traces = candidate.traces;
    } else {
      in.suffix_traces = model.Trace(prefix, suffix);
    }
  }
  if (req & kNeedSuffixUncond) in.suffix_uncond_traces = model.Trace({}, suffix);
  if (req & kNeedFullUncond) {
    in.full_uncond_traces =
        full && !in.suffix_traces.empty() ? in.suffix_traces
                                          : model.Trace({}, full_seq);
  }
  const std::size_t n_prefixes =
      static_cast<std::size_t>(config.recall_num_prefixes);
  if (prefix_set != nullptr) {
    if ((req & kNeedNonMember) &&
        prefix_set->nonmember_prefixes.size() >= n_prefixes) {
      for (std::size_t i = 0; i < n_prefixes; ++i) {
        in.full_cond_traces_nm.push_back(
            model.Trace(prefix_set->nonmember_prefixes[i], full_seq));
      }
    }
    if ((req & kNeedMember) && prefix_set->member_prefixes.size() >= n_prefixes) {
      for (std::size_t i = 0; i < n_prefixes; ++i) {
        in.full_cond_traces_m.push_back(
            model.Trace(prefix_set->member_prefixes[i], full_seq));
      }
    }
  }
  if (req & (kNeedText | kNeedLowercase)) {
    const std::string prefix_text =
        example.prefix_text ? *example.prefix_text : model.Detokenize(prefix);
    const std::string suffix_text = model.Detokenize(suffix);
    if (req & kNeedText) {
      in.suffix_text = full ? prefix_text + suffix_text : suffix_text;
    }
    if (req & kNeedLowercase) {
      in.lowercase_traces =
          model.TraceText(prefix_text, suffix_text, /*lowercase=*/true).traces;
    }
  }
  return in;
}

ScoreOutcome EvaluateScores(const ScoreInput& input, const ScoreConfig& config,
                            const std::vector<std::string>& names) {
  ScoreOutcome out;
  for (const std::string& name : names) {
    const ScoreDef& def = FindScore(name);
    try {
      const double value = def.compute(input, config);
      if (!std::isfinite(value)) {
        out.errors.push_back(fmt::format("score '{}' is not finite", name));
        continue;
      }
      out.scores[name] = value;
    } catch (const Error& e) {
      out.errors.push_back(e.what());
    }
  }
  return out;
}

ScoreOutcome ComputeAllScores(const LanguageModel& model,
                              const ExtractionExample& example,
                              const ScoredCandidate& candidate,
                              const ScoreConfig& config,
                              const ReferencePrefixSet* prefix_set,
                              ScoreMode mode,
                              const std::vector<std::string>& enabled,
                              std::optional<double> batch_mean_logprob) {
  const std::vector<std::string> names = ScoresForMode(enabled, mode);
  const ScoreInput input =
      BuildScoreInput(model, example, candidate, config, prefix_set, mode,
                      CombinedRequirements(names), batch_mean_logprob);
  return EvaluateScores(input, config, names);
}

double BatchMeanLogprob(const std::vector<ScoredCandidate>& batch) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const ScoredCandidate& c : batch) {
    for (const TokenTrace& t : c.traces) {
      sum += t.logprob;
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace vp
