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
#ifndef VP_SCORES_SCORES_H_
#define VP_SCORES_SCORES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vp/core/score_config.h"
#include "vp/core/types.h"

namespace vp {

// Everything the membership scores read. p is the true prefix, s the
// candidate suffix, p_nm / p_m generic non-member / member prefixes.
// Empty lists mean "not computed".
struct ScoreInput {
  TraceSeq suffix_traces;                    // s | p
  TraceSeq suffix_uncond_traces;             // s | (empty)
  std::vector<TraceSeq> full_cond_traces_nm; // (p,s) | p_nm, one per prefix
  std::vector<TraceSeq> full_cond_traces_m;  // (p,s) | p_m, one per prefix
  TraceSeq full_uncond_traces;               // (p,s) | (empty)
  TraceSeq lowercase_traces;                 // lower(s) | lower(p)
  std::optional<std::string> suffix_text;
  std::optional<double> batch_mean_logprob;  // mean token logprob of the batch
};

// Stable score identifiers.
inline constexpr std::string_view kLikelihood = "likelihood";
inline constexpr std::string_view kZlib = "zlib";
inline constexpr std::string_view kHighConf = "high_conf";
inline constexpr std::string_view kOutlier = "outlier";
inline constexpr std::string_view kSurp = "surp";
inline constexpr std::string_view kRecall = "recall";
inline constexpr std::string_view kSRecall = "s_recall";
inline constexpr std::string_view kConRecall = "con_recall";
inline constexpr std::string_view kLowercase = "lowercase";
inline constexpr std::string_view kMinK = "min_k";
inline constexpr std::string_view kMinKpp = "min_k_pp";

// All scores are oriented so that larger means more member-like. Each
// throws Error(kMissingRequirement) naming the score and the absent field.
// "LL" is the sum of token logprobs; Likelihood and the per-token scores
// use means.
double ScoreLikelihood(const ScoreInput& in);
double ScoreZlib(const ScoreInput& in);
double ScoreHighConfidence(const ScoreInput& in, const ScoreConfig& config);
double ScoreOutlierRobust(const ScoreInput& in, const ScoreConfig& config);
double ScoreSurp(const ScoreInput& in, const ScoreConfig& config);
double ScoreRecall(const ScoreInput& in);
double ScoreSRecall(const ScoreInput& in);
double ScoreConRecall(const ScoreInput& in, const ScoreConfig& config);
double ScoreLowercase(const ScoreInput& in);
double ScoreMinK(const ScoreInput& in, double k_fraction);
double ScoreMinKpp(const ScoreInput& in, double k_fraction);

// Number of tokens Min-K% keeps out of n: max(1, floor(k * n)).
std::size_t MinKCount(double k_fraction, std::size_t n);

}  // namespace vp

#endif  // VP_SCORES_SCORES_H_
