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
#include "testing/hand_cases.h"

#include <cmath>

#include "testing/inflate.h"
#include "vp/core/score_config.h"
#include "vp/scores/compress.h"
#include "vp/scores/scores.h"

namespace vp::testing {

bool HandCase::ok() const {
  return std::isfinite(got) && std::abs(got - expected) <= tolerance;
}

TokenTrace MakeHandTrace(double logprob, double mu, double sigma,
                         double argmax_logprob, Token token, Token argmax_token) {
  TokenTrace t;
  t.token = token;
  t.logprob = logprob;
  t.mu = mu;
  t.sigma = sigma;
  t.entropy = -mu;
  t.argmax_token = argmax_token;
  t.argmax_logprob = std::max(argmax_logprob, logprob);
  return t;
}

TraceSeq HandTraces(const std::vector<double>& logprobs) {
  TraceSeq out;
  for (double lp : logprobs) out.push_back(MakeHandTrace(lp));
  return out;
}

namespace {

// Traces whose log-likelihood sums to `ll` over `n` tokens.
TraceSeq WithSum(double ll, int n = 4) {
  return HandTraces(std::vector<double>(n, ll / n));
}

ScoreInput Suffix(TraceSeq traces) {
  ScoreInput in;
  in.suffix_traces = std::move(traces);
  return in;
}

}  // namespace

std::vector<HandCase> ScoreHandCases() {
  std::vector<HandCase> cases;
  const ScoreConfig defaults;
  auto add = [&](std::string name, double got, double expected,
                 double tol = 1e-9) {
    cases.push_back({std::move(name), got, expected, tol});
  };

  // Likelihood.
  const double half = std::log(0.5), quarter = std::log(0.25), eighth = std::log(0.125);
  add("likelihood/halving_probs", ScoreLikelihood(Suffix(HandTraces({half, quarter, eighth}))),
      (half + quarter + eighth) / 3.0);
  add("likelihood/halving_probs_rounded",
      ScoreLikelihood(Suffix(HandTraces({half, quarter, eighth}))), -1.3863, 1e-4);
  const double near_one = std::log1p(-1e-9);
  const double sure = ScoreLikelihood(Suffix(HandTraces({near_one, near_one, near_one})));
  add("likelihood/near_certain_is_zero_minus", sure, near_one);
  add("likelihood/near_certain_negative", sure < 0.0 ? 1.0 : 0.0, 1.0);
  {
    const std::vector<double> base = {-0.3, -1.7, -2.2, -0.9};
    std::vector<double> shifted;
    for (double v : base) shifted.push_back(v + 0.125);
    add("likelihood/shift_by_delta",
        ScoreLikelihood(Suffix(HandTraces(shifted))) - ScoreLikelihood(Suffix(HandTraces(base))),
        0.125);
  }

  // Zlib.
  {
    const std::string fox = "the quick brown fox jumps over the lazy dog";
    const std::string stream = ZlibCompress(fox);
    add("zlib/fox_inflates_back", InflateZlib(stream) == fox ? 1.0 : 0.0, 1.0);
    // Frozen from an independent zlib build at level 6.
    add("zlib/fox_length", static_cast<double>(ZlibCompressedLength(fox)), 50.0);
    ScoreInput in = Suffix(WithSum(-41.6));
    in.suffix_text = fox;
    add("zlib/fox_score", ScoreZlib(in), -41.6 / 50.0);
    add("zlib/empty_inflates_back", InflateZlib(ZlibCompress("")).empty() ? 1.0 : 0.0, 1.0);
    add("zlib/empty_length", static_cast<double>(ZlibCompressedLength("")), 8.0);
    ScoreInput repetitive = Suffix(WithSum(-41.6));
    repetitive.suffix_text = std::string(fox.size(), 'a');
    add("zlib/compressible_scores_lower",
        ScoreZlib(repetitive) < ScoreZlib(in) ? 1.0 : 0.0, 1.0);
  }

  // High confidence.
  {
    std::vector<double> lps;
    for (int i = 0; i < 50; ++i) lps.push_back(-1.0 - 0.01 * i);
    ScoreInput plain = Suffix(HandTraces(lps));
    for (TokenTrace& t : plain.suffix_traces) t.argmax_logprob = std::log(0.5);
    plain.batch_mean_logprob = -2.0;
    const double likelihood = ScoreLikelihood(plain);
    add("high_conf/no_confident_steps", ScoreHighConfidence(plain, defaults), likelihood);

    ScoreInput one = plain;
    one.suffix_traces[7].argmax_logprob = std::log(0.95);
    one.suffix_traces[7].logprob = std::log(0.95);
    const double one_likelihood = ScoreLikelihood(one);
    add("high_conf/one_conf1_token", ScoreHighConfidence(one, defaults),
        one_likelihood + 0.04);

    ScoreInput both = one;
    both.suffix_traces[20].argmax_logprob = std::log(0.95);
    both.suffix_traces[20].argmax_token = 2;
    add("high_conf/conf1_and_conf2_cancel", ScoreHighConfidence(both, defaults),
        ScoreLikelihood(both));
  }

  // Outlier robust.
  {
    add("outlier/no_outliers",
        ScoreOutlierRobust(Suffix(HandTraces({-1.0, -1.5, -2.0, -0.5})), defaults),
        ScoreLikelihood(Suffix(HandTraces({-1.0, -1.5, -2.0, -0.5}))));
    std::vector<double> lps(49, -1.0);
    lps.push_back(-100.0);
    add("outlier/one_far_outlier", ScoreOutlierRobust(Suffix(HandTraces(lps)), defaults),
        (49.0 * -1.0 + -2.98) / 50.0);
    add("outlier/one_far_outlier_rounded",
        ScoreOutlierRobust(Suffix(HandTraces(lps)), defaults), -1.0396, 1e-4);
    add("outlier/all_equal", ScoreOutlierRobust(Suffix(HandTraces({-3.0, -3.0, -3.0})), defaults),
        -3.0);
  }

  // SURP.
  {
    TraceSeq high;
    for (double lp : {-0.5, -2.5, -3.0}) high.push_back(MakeHandTrace(lp, -4.0));
    add("surp/all_high_entropy_falls_back", ScoreSurp(Suffix(high), defaults),
        ScoreLikelihood(Suffix(high)));
    TraceSeq steps = {MakeHandTrace(std::log(0.3), -1.0), MakeHandTrace(std::log(0.1), -3.0),
                      MakeHandTrace(std::log(0.9), -1.5)};
    add("surp/one_surprising_step", ScoreSurp(Suffix(steps), defaults), std::log(0.3));
    add("surp/one_surprising_step_rounded", ScoreSurp(Suffix(steps), defaults), -1.2040, 1e-4);
    TraceSeq raised = steps;
    raised[0].logprob = std::log(0.35);
    add("surp/raising_selected_raises_score",
        ScoreSurp(Suffix(raised), defaults) > ScoreSurp(Suffix(steps), defaults) ? 1.0 : 0.0,
        1.0);
  }

  // ReCaLL family.
  {
    ScoreInput in;
    in.full_uncond_traces = WithSum(-100.0);
    in.full_cond_traces_nm = {WithSum(-100.0)};
    add("recall/no_prefix_effect", ScoreRecall(in), 1.0);
    in.full_cond_traces_nm = {WithSum(-80.0)};
    add("recall/cond_80_uncond_100", ScoreRecall(in), 0.8);
    in.full_cond_traces_nm = {WithSum(-80.0), WithSum(-100.0)};
    add("recall/mean_of_two_prefixes", ScoreRecall(in), 0.9);

    ScoreInput s;
    s.suffix_traces = WithSum(-100.0);
    s.suffix_uncond_traces = WithSum(-100.0);
    add("s_recall/no_prefix_effect", ScoreSRecall(s), 1.0);
    s.suffix_traces = WithSum(-1.0);
    s.suffix_uncond_traces = WithSum(-120.0);
    add("s_recall/memorized", ScoreSRecall(s), 120.0);
    s.suffix_traces = WithSum(-90.0);
    s.suffix_uncond_traces = WithSum(-100.0);
    add("s_recall/not_memorized", ScoreSRecall(s), 100.0 / 90.0);
    add("s_recall/not_memorized_rounded", ScoreSRecall(s), 1.11, 0.005);

    ScoreInput c;
    c.full_uncond_traces = WithSum(-100.0);
    c.full_cond_traces_m = {WithSum(-90.0)};
    c.full_cond_traces_nm = {WithSum(-90.0)};
    add("con_recall/identical_conditioning", ScoreConRecall(c, defaults), 0.0);
    c.full_cond_traces_m = {WithSum(-80.0)};
    c.full_cond_traces_nm = {WithSum(-95.0)};
    add("con_recall/hand_values", ScoreConRecall(c, defaults), -0.15);
    ScoreConfig gamma0;
    gamma0.conrecall_gamma = 0.0;
    add("con_recall/gamma_zero_is_minus_recall", ScoreConRecall(c, gamma0), -ScoreRecall(c), 0.0);
  }

  // Lowercase.
  {
    ScoreInput in;
    in.suffix_traces = WithSum(-12.0);
    in.lowercase_traces = WithSum(-12.0);
    add("lowercase/already_lowercase", ScoreLowercase(in), 1.0);
    in.suffix_traces = WithSum(-5.0);
    in.lowercase_traces = WithSum(-60.0);
    add("lowercase/memorized_cased", ScoreLowercase(in), 12.0);
  }

  // Min-K% and Min-K%++.
  {
    const ScoreInput five = Suffix(HandTraces({-1, -2, -3, -4, -5}));
    add("min_k/full_set_is_likelihood", ScoreMinK(five, 1.0), ScoreLikelihood(five), 0.0);
    add("min_k/two_smallest", ScoreMinK(five, 0.4), -4.5);
    add("min_k/floor_guard", ScoreMinK(Suffix(HandTraces({-1, -7, -3})), 0.2), -7.0);

    TraceSeq flat = {MakeHandTrace(-1.0, -1.5, 0.0), MakeHandTrace(-2.0, -1.5, 0.0)};
    const double guarded = ScoreMinKpp(Suffix(flat), 1.0);
    add("min_k_pp/sigma_floor_finite", std::isfinite(guarded) ? 1.0 : 0.0, 1.0);
    add("min_k_pp/logprob_equals_mu", ScoreMinKpp(Suffix({MakeHandTrace(-2.5, -2.5, 0.7)}), 0.2),
        0.0);
    TraceSeq z = {MakeHandTrace(-1.8, -3.0, 1.0), MakeHandTrace(-3.5, -3.0, 1.0),
                  MakeHandTrace(-5.0, -3.0, 1.0)};
    add("min_k_pp/selects_lowest_z", ScoreMinKpp(Suffix(z), 0.4), -2.0);
  }
  return cases;
}

}  // namespace vp::testing
