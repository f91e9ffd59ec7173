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
#include "vp/scores/scores.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "vp/core/error.h"
#include "vp/scores/compress.h"

namespace vp {
namespace {

constexpr double kSigmaFloor = 1e-6;

const TraceSeq& Need(const TraceSeq& traces, std::string_view score,
                     const char* field) {
  if (traces.empty()) {
    Fail(ErrorKind::kMissingRequirement,
         fmt::format("score '{}' requires field '{}'", score, field));
  }
  return traces;
}

const std::vector<TraceSeq>& Need(const std::vector<TraceSeq>& lists,
                                  std::string_view score, const char* field) {
  if (lists.empty() ||
      std::any_of(lists.begin(), lists.end(),
                  [](const TraceSeq& t) { return t.empty(); })) {
    Fail(ErrorKind::kMissingRequirement,
         fmt::format("score '{}' requires field '{}'", score, field));
  }
  return lists;
}

double MeanLogprob(const TraceSeq& traces) {
  return SumLogprob(traces) / static_cast<double>(traces.size());
}

// Mean of the m smallest values, summed in positional order so that m == n
// reproduces the plain mean bit for bit.
double MeanOfSmallest(const std::vector<double>& values, std::size_t m) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  double sum = 0.0;
  for (std::size_t i : idx) sum += values[i];
  return sum / static_cast<double>(m);
}

// Mean over prefixes of LL(list_i) / denominator.
double MeanRatio(const std::vector<TraceSeq>& lists, double denominator) {
  double sum = 0.0;
  for (const TraceSeq& t : lists) sum += SumLogprob(t) / denominator;
  return sum / static_cast<double>(lists.size());
}

double MeanLL(const std::vector<TraceSeq>& lists) {
  double sum = 0.0;
  for (const TraceSeq& t : lists) sum += SumLogprob(t);
  return sum / static_cast<double>(lists.size());
}

}  // namespace

std::size_t MinKCount(double k_fraction, std::size_t n) {
  const double raw = std::floor(k_fraction * static_cast<double>(n) + 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 0.0)),
                                 1, std::max<std::size_t>(n, 1));
}

double ScoreLikelihood(const ScoreInput& in) {
  return MeanLogprob(Need(in.suffix_traces, kLikelihood, "suffix_traces"));
}

double ScoreZlib(const ScoreInput& in) {
  const TraceSeq& traces = Need(in.suffix_traces, kZlib, "suffix_traces");
  if (!in.suffix_text) {
    Fail(ErrorKind::kMissingRequirement,
         "score 'zlib' requires field 'suffix_text'");
  }
  return SumLogprob(traces) /
         static_cast<double>(ZlibCompressedLength(*in.suffix_text));
}

double ScoreHighConfidence(const ScoreInput& in, const ScoreConfig& config) {
  const TraceSeq& traces = Need(in.suffix_traces, kHighConf, "suffix_traces");
  if (!in.batch_mean_logprob) {
    Fail(ErrorKind::kMissingRequirement,
         "score 'high_conf' requires field 'batch_mean_logprob'");
  }
  const double bonus = config.hc_alpha * *in.batch_mean_logprob;
  double sum = 0.0;
  for (const TokenTrace& t : traces) {
    const bool confident = std::exp(t.argmax_logprob) >= config.hc_tau;
    const double indicator =
        confident ? (t.token == t.argmax_token ? 1.0 : -1.0) : 0.0;
    sum += t.logprob - indicator * bonus;
  }
  return sum / static_cast<double>(traces.size());
}

double ScoreOutlierRobust(const ScoreInput& in, const ScoreConfig& config) {
  const TraceSeq& traces = Need(in.suffix_traces, kOutlier, "suffix_traces");
  const double n = static_cast<double>(traces.size());
  const double mean = MeanLogprob(traces);
  double var = 0.0;
  for (const TokenTrace& t : traces) {
    var += (t.logprob - mean) * (t.logprob - mean);
  }
  const double sigma = std::sqrt(var / n);
  double sum = 0.0;
  for (const TokenTrace& t : traces) {
    const bool outlier =
        sigma > 0.0 &&
        std::abs(t.logprob - mean) > config.outlier_sigma_mult * sigma;
    sum += outlier ? mean : t.logprob;
  }
  return sum / n;
}

double ScoreSurp(const ScoreInput& in, const ScoreConfig& config) {
  const TraceSeq& traces = Need(in.suffix_traces, kSurp, "suffix_traces");
  double sum = 0.0;
  std::size_t count = 0;
  for (const TokenTrace& t : traces) {
    if (t.entropy <= config.surp_entropy_max &&
        std::exp(t.logprob) <= config.surp_low_threshold) {
      sum += t.logprob;
      ++count;
    }
  }
  if (count == 0) return MeanLogprob(traces);
  return sum / static_cast<double>(count);
}

double ScoreRecall(const ScoreInput& in) {
  const auto& nm = Need(in.full_cond_traces_nm, kRecall, "full_cond_traces_nm");
  const TraceSeq& uncond =
      Need(in.full_uncond_traces, kRecall, "full_uncond_traces");
  return MeanRatio(nm, SumLogprob(uncond));
}

double ScoreSRecall(const ScoreInput& in) {
  const TraceSeq& cond = Need(in.suffix_traces, kSRecall, "suffix_traces");
  const TraceSeq& uncond =
      Need(in.suffix_uncond_traces, kSRecall, "suffix_uncond_traces");
  return SumLogprob(uncond) / SumLogprob(cond);
}

double ScoreConRecall(const ScoreInput& in, const ScoreConfig& config) {
  const auto& nm =
      Need(in.full_cond_traces_nm, kConRecall, "full_cond_traces_nm");
  const auto& m = Need(in.full_cond_traces_m, kConRecall, "full_cond_traces_m");
  const double uncond = SumLogprob(
      Need(in.full_uncond_traces, kConRecall, "full_uncond_traces"));
  // (gamma * LL_m - LL_nm) / LL_uncond, split so that gamma = 0 yields
  // exactly -ReCaLL.
  return config.conrecall_gamma * MeanLL(m) / uncond - MeanRatio(nm, uncond);
}

double ScoreLowercase(const ScoreInput& in) {
  const TraceSeq& lower =
      Need(in.lowercase_traces, kLowercase, "lowercase_traces");
  const TraceSeq& orig = Need(in.suffix_traces, kLowercase, "suffix_traces");
  return SumLogprob(lower) / SumLogprob(orig);
}

double ScoreMinK(const ScoreInput& in, double k_fraction) {
  const TraceSeq& traces = Need(in.suffix_traces, kMinK, "suffix_traces");
  std::vector<double> values;
  values.reserve(traces.size());
  for (const TokenTrace& t : traces) values.push_back(t.logprob);
  return MeanOfSmallest(values, MinKCount(k_fraction, values.size()));
}

double ScoreMinKpp(const ScoreInput& in, double k_fraction) {
  const TraceSeq& traces = Need(in.suffix_traces, kMinKpp, "suffix_traces");
  std::vector<double> values;
  values.reserve(traces.size());
  for (const TokenTrace& t : traces) {
    values.push_back((t.logprob - t.mu) / std::max(t.sigma, kSigmaFloor));
  }
  return MeanOfSmallest(values, MinKCount(k_fraction, values.size()));
}

}  // namespace vp
