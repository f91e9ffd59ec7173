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
#include "vp/generation/transforms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vp/core/error.h"

namespace vp {
namespace {

// Cumulative-mass comparisons tolerate this much rounding, so that e.g. five
// tokens of 0.2 reach a 0.6 target after three.
constexpr double kMassSlack = 1e-12;

std::vector<double> Renormalize(std::vector<double> probs) {
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (!(sum > 0.0)) {
    Fail(ErrorKind::kGeneration, "transform chain emptied the support");
  }
  for (double& p : probs) p /= sum;
  return probs;
}

std::vector<std::size_t> OrderBy(std::size_t n, auto less) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), less);
  return order;
}

// Keeps order[0..m) where m is the shortest prefix reaching `mass`.
std::vector<double> KeepPrefixByMass(std::span<const double> probs,
                                     const std::vector<std::size_t>& order,
                                     double mass) {
  std::vector<double> out(probs.size(), 0.0);
  double cumulative = 0.0;
  for (std::size_t idx : order) {
    if (probs[idx] <= 0.0) break;
    out[idx] = probs[idx];
    cumulative += probs[idx];
    if (cumulative >= mass - kMassSlack) break;
  }
  return Renormalize(std::move(out));
}

}  // namespace

std::vector<double> Softmax(std::span<const double> logits) {
  double max_logit = -std::numeric_limits<double>::infinity();
  for (double l : logits) max_logit = std::max(max_logit, l);
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

std::vector<double> ApplyTemperature(std::span<const double> logits,
                                     double temperature) {
  if (!(temperature > 0.0)) {
    Fail(ErrorKind::kConfig, "temperature must be > 0");
  }
  std::vector<double> out(logits.begin(), logits.end());
  if (temperature == 1.0) return out;
  for (double& l : out) l /= temperature;
  return out;
}

std::vector<double> ApplyRepetitionPenalty(std::span<const double> logits,
                                           TokenSpan seen, double penalty) {
  if (!(penalty >= 1.0)) {
    Fail(ErrorKind::kConfig, "repetition penalty must be >= 1");
  }
  std::vector<double> out(logits.begin(), logits.end());
  if (penalty == 1.0) return out;
  std::vector<bool> done(out.size(), false);
  for (Token t : seen) {
    if (t >= out.size() || done[t]) continue;
    done[t] = true;
    out[t] = out[t] > 0.0 ? out[t] / penalty : out[t] * penalty;
  }
  return out;
}

std::vector<double> ApplyTopK(std::span<const double> probs, int k) {
  if (k < 1) Fail(ErrorKind::kConfig, "top_k must be >= 1");
  if (static_cast<std::size_t>(k) >= probs.size()) {
    return std::vector<double>(probs.begin(), probs.end());
  }
  auto order = OrderBy(probs.size(), [&](std::size_t a, std::size_t b) {
    return probs[a] > probs[b];
  });
  std::vector<double> out(probs.size(), 0.0);
  for (int i = 0; i < k; ++i) out[order[i]] = probs[order[i]];
  return Renormalize(std::move(out));
}

std::vector<double> ApplyNucleus(std::span<const double> probs, double p) {
  if (!(p > 0.0 && p <= 1.0)) Fail(ErrorKind::kConfig, "top_p must be in (0, 1]");
  if (p == 1.0) return std::vector<double>(probs.begin(), probs.end());
  auto order = OrderBy(probs.size(), [&](std::size_t a, std::size_t b) {
    return probs[a] > probs[b];
  });
  return KeepPrefixByMass(probs, order, p);
}

std::vector<double> ApplyTypical(std::span<const double> probs, double phi) {
  if (!(phi > 0.0 && phi <= 1.0)) {
    Fail(ErrorKind::kConfig, "typical_p must be in (0, 1]");
  }
  if (phi == 1.0) return std::vector<double>(probs.begin(), probs.end());
  double entropy = 0.0;
  for (double q : probs) {
    if (q > 0.0) entropy -= q * std::log(q);
  }
  std::vector<double> distance(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    distance[i] = probs[i] > 0.0 ? std::abs(-std::log(probs[i]) - entropy)
                                 : std::numeric_limits<double>::infinity();
  }
  auto order = OrderBy(probs.size(), [&](std::size_t a, std::size_t b) {
    return distance[a] < distance[b];
  });
  std::vector<double> out(probs.size(), 0.0);
  double cumulative = 0.0;
  for (std::size_t idx : order) {
    if (probs[idx] <= 0.0) break;
    out[idx] = probs[idx];
    cumulative += probs[idx];
    if (cumulative >= phi - kMassSlack) break;
  }
  return Renormalize(std::move(out));
}

std::vector<double> TransformDistribution(std::span<const double> probs,
                                          const GenerationConfig& config,
                                          TokenSpan seen) {
  std::vector<double> current(probs.begin(), probs.end());
  const bool penalize =
      config.repetition_penalty && *config.repetition_penalty != 1.0;
  const bool temper = config.temperature && *config.temperature != 1.0;
  if (penalize || temper) {
    std::vector<double> logits(current.size());
    for (std::size_t i = 0; i < current.size(); ++i) {
      logits[i] = current[i] > 0.0 ? std::log(current[i])
                                   : -std::numeric_limits<double>::infinity();
    }
    if (penalize) {
      logits = ApplyRepetitionPenalty(logits, seen, *config.repetition_penalty);
    }
    if (temper) logits = ApplyTemperature(logits, *config.temperature);
    current = Softmax(logits);
  }
  if (config.top_k) current = ApplyTopK(current, *config.top_k);
  if (config.top_p) current = ApplyNucleus(current, *config.top_p);
  if (config.typical_p) current = ApplyTypical(current, *config.typical_p);
  if (penalize || temper || config.top_k || config.top_p || config.typical_p) {
    current = Renormalize(std::move(current));
  }
  return current;
}

}  // namespace vp
