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
#include "vp/cli/selftest.h"

#include <chrono>
#include <cmath>
#include <memory>

#include <fmt/core.h>

#include "vp/core/rng.h"
#include "vp/eval/metrics.h"
#include "vp/memlab/keidetic.h"
#include "vp/scores/scores.h"

namespace vp {
namespace {

class Timer {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Random trace with a consistent (logprob <= argmax_logprob <= 0) shape.
TokenTrace RandomTrace(Rng& rng) {
  TokenTrace t;
  t.token = static_cast<Token>(rng.Below(50));
  t.argmax_token = rng.Uniform() < 0.5 ? t.token : static_cast<Token>(rng.Below(50));
  t.argmax_logprob = -rng.Uniform() * 0.5;
  t.logprob = t.token == t.argmax_token ? t.argmax_logprob
                                        : t.argmax_logprob - rng.Uniform() * 6.0;
  t.mu = -rng.Uniform() * 4.0;
  t.entropy = -t.mu;
  t.sigma = rng.Uniform() * 2.0;
  return t;
}

TraceSeq RandomTraces(Rng& rng, std::size_t n) {
  TraceSeq out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(RandomTrace(rng));
  return out;
}

bool OutlierFree(const TraceSeq& traces, double mult) {
  double mean = 0.0;
  for (const TokenTrace& t : traces) mean += t.logprob;
  mean /= static_cast<double>(traces.size());
  double var = 0.0;
  for (const TokenTrace& t : traces) var += (t.logprob - mean) * (t.logprob - mean);
  const double sigma = std::sqrt(var / static_cast<double>(traces.size()));
  for (const TokenTrace& t : traces) {
    if (sigma > 0.0 && std::abs(t.logprob - mean) > mult * sigma) return false;
  }
  return true;
}

}  // namespace

CheckResult CheckRocOracle(int n_sets, std::uint64_t seed) {
  Timer timer;
  CheckResult r{"roc oracle", true, "", 0.0};
  Rng rng = SeededRng(seed, "selftest/roc");
  for (int s = 0; s < n_sets && r.passed; ++s) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.Below(199));
    // Few distinct levels on half the sets to force ties.
    const std::uint64_t levels = s % 2 == 0 ? 1 + rng.Below(8) : 0;
    std::vector<double> scores(n);
    auto labels = std::make_unique<bool[]>(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = levels ? static_cast<double>(rng.Below(levels)) : rng.Normal();
      labels[i] = rng.Uniform() < 0.5;
    }
    labels[0] = true;
    labels[1] = false;
    double wins = 0.0;
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < n; ++i) (labels[i] ? pos : neg)++;
    for (std::size_t i = 0; i < n; ++i) {
      if (!labels[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (labels[j]) continue;
        if (scores[i] > scores[j]) wins += 1.0;
        if (scores[i] == scores[j]) wins += 0.5;
      }
    }
    const double brute = wins / (static_cast<double>(pos) * static_cast<double>(neg));
    const RocCurve curve = Roc(scores, std::span<const bool>(labels.get(), n));
    if (curve.auroc != brute) {
      r.passed = false;
      r.detail = fmt::format("set {}: rank {} vs pairwise {}", s, curve.auroc, brute);
    } else if (std::abs(TrapezoidArea(curve) - curve.auroc) > 1e-9) {
      r.passed = false;
      r.detail = fmt::format("set {}: trapezoid {} vs {}", s, TrapezoidArea(curve),
                             curve.auroc);
    }
  }
  if (r.passed) r.detail = fmt::format("{} random sets", n_sets);
  r.seconds = timer.Seconds();
  return r;
}

CheckResult CheckScoreIdentities(int n_sets, std::uint64_t seed) {
  Timer timer;
  CheckResult r{"score identities", true, "", 0.0};
  Rng rng = SeededRng(seed, "selftest/scores");
  int outlier_checked = 0;
  for (int s = 0; s < n_sets && r.passed; ++s) {
    ScoreInput in;
    in.suffix_traces = RandomTraces(rng, 1 + rng.Below(60));
    in.batch_mean_logprob = -rng.Uniform() * 5.0;
    in.full_uncond_traces = RandomTraces(rng, 1 + rng.Below(80));
    const std::size_t n_prefixes = 1 + rng.Below(4);
    for (std::size_t i = 0; i < n_prefixes; ++i) {
      in.full_cond_traces_nm.push_back(RandomTraces(rng, in.full_uncond_traces.size()));
      in.full_cond_traces_m.push_back(RandomTraces(rng, in.full_uncond_traces.size()));
    }
    ScoreConfig config;
    config.hc_alpha = 0.0;
    config.conrecall_gamma = 0.0;
    config.hc_tau = 0.05 + 0.9 * rng.Uniform();
    const double likelihood = ScoreLikelihood(in);
    auto fail = [&](const std::string& what, double a, double b) {
      r.passed = false;
      r.detail = fmt::format("set {}: {} ({} vs {})", s, what, a, b);
    };
    if (const double v = ScoreMinK(in, 1.0); v != likelihood) {
      fail("min_k(1.0) != likelihood", v, likelihood);
    } else if (const double h = ScoreHighConfidence(in, config); h != likelihood) {
      fail("high_conf(alpha=0) != likelihood", h, likelihood);
    } else if (const double c = ScoreConRecall(in, config); c != -ScoreRecall(in)) {
      fail("con_recall(gamma=0) != -recall", c, -ScoreRecall(in));
    }
    // Short sets keep every z-score below sqrt(n - 1) < 3, so these are
    // always outlier-free; longer ones are checked when they happen to be.
    TraceSeq short_set = RandomTraces(rng, 1 + rng.Below(9));
    for (const TraceSeq* traces : {&in.suffix_traces, &short_set}) {
      if (!r.passed || !OutlierFree(*traces, config.outlier_sigma_mult)) continue;
      ScoreInput o;
      o.suffix_traces = *traces;
      ++outlier_checked;
      if (ScoreOutlierRobust(o, config) != ScoreLikelihood(o)) {
        fail("outlier != likelihood on outlier-free traces",
             ScoreOutlierRobust(o, config), ScoreLikelihood(o));
      }
    }
  }
  if (r.passed) {
    r.detail = fmt::format("{} random trace sets ({} outlier-free)", n_sets,
                           outlier_checked);
  }
  r.seconds = timer.Seconds();
  return r;
}

CheckResult CheckKEideticOracle(int n_cases, std::uint64_t seed) {
  Timer timer;
  CheckResult r{"k-eidetic oracle", true, "", 0.0};
  Rng rng = SeededRng(seed, "selftest/keidetic");
  for (int c = 0; c < n_cases && r.passed; ++c) {
    // Small alphabets make repeats and overlaps common.
    const std::uint64_t alphabet = 1 + rng.Below(4);
    std::vector<TokenSeq> corpus(rng.Below(12));
    for (TokenSeq& doc : corpus) {
      doc.resize(rng.Below(30));
      for (Token& t : doc) t = static_cast<Token>(rng.Below(alphabet));
    }
    std::vector<TokenSeq> patterns(1 + rng.Below(5));
    for (TokenSeq& p : patterns) {
      if (!corpus.empty() && rng.Uniform() < 0.5) {
        const TokenSeq& doc = corpus[rng.Below(corpus.size())];
        if (!doc.empty()) {
          const std::size_t start = rng.Below(doc.size());
          const std::size_t len = 1 + rng.Below(doc.size() - start);
          p.assign(doc.begin() + static_cast<std::ptrdiff_t>(start),
                   doc.begin() + static_cast<std::ptrdiff_t>(start + len));
          continue;
        }
      }
      p.resize(1 + rng.Below(5));
      for (Token& t : p) t = static_cast<Token>(rng.Below(alphabet));
    }
    const std::vector<std::size_t> fast = PatternCounter(patterns).CountExamples(corpus);
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      const std::size_t naive = KEideticCountNaive(corpus, patterns[i]);
      if (fast[i] != naive) {
        r.passed = false;
        r.detail = fmt::format("case {} pattern {}: automaton {} vs scan {}", c, i,
                               fast[i], naive);
        break;
      }
    }
  }
  if (r.passed) r.detail = fmt::format("{} random cases", n_cases);
  r.seconds = timer.Seconds();
  return r;
}

std::vector<CheckResult> RunSelftest(std::uint64_t seed) {
  return {CheckRocOracle(1000, seed), CheckScoreIdentities(500, seed),
          CheckKEideticOracle(10000, seed)};
}

}  // namespace vp
