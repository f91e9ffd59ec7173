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
#include "vp/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include <fmt/core.h>

#include "vp/core/error.h"

namespace vp {
namespace {

void CheckKeys(const SequenceMap& top1, const SequenceMap& truth) {
  if (truth.empty()) Fail(ErrorKind::kInput, "no examples to evaluate");
  if (top1.size() != truth.size() ||
      !std::equal(top1.begin(), top1.end(), truth.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    Fail(ErrorKind::kInput, "top-1 and truth cover different example ids");
  }
}

}  // namespace

double PrecisionMp(const SequenceMap& top1, const SequenceMap& truth) {
  CheckKeys(top1, truth);
  std::size_t hits = 0;
  for (const auto& [id, seq] : truth) {
    if (top1.at(id) == seq) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

HammingResult HammingMh(const SequenceMap& top1, const SequenceMap& truth) {
  CheckKeys(top1, truth);
  HammingResult r;
  for (const auto& [id, y] : truth) {
    const TokenSeq& x = top1.at(id);
    const std::size_t len = std::max(x.size(), y.size());
    std::size_t diff = 0;
    for (std::size_t j = 0; j < len; ++j) {
      if (j >= x.size() || j >= y.size() || x[j] != y[j]) ++diff;
    }
    r.count += static_cast<double>(diff);
    r.normalized +=
        static_cast<double>(diff) / static_cast<double>(std::max<std::size_t>(y.size(), 1));
  }
  const double n = static_cast<double>(truth.size());
  r.count /= n;
  r.normalized /= n;
  return r;
}

RocCurve Roc(std::span<const double> scores, std::span<const bool> labels) {
  if (scores.size() != labels.size()) {
    Fail(ErrorKind::kMetric, "scores and labels differ in length");
  }
  RocCurve curve;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      Fail(ErrorKind::kMetric, fmt::format("score {} is not finite", i));
    }
    labels[i] ? ++curve.n_pos : ++curve.n_neg;
  }
  if (curve.n_pos == 0 || curve.n_neg == 0) {
    Fail(ErrorKind::kMetric,
         fmt::format("ROC needs both classes (positives {}, negatives {})",
                     curve.n_pos, curve.n_neg));
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  const double P = static_cast<double>(curve.n_pos);
  const double N = static_cast<double>(curve.n_neg);
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  // Rank statistic accumulated group by group: a positive beats every
  // negative strictly below it and ties with those in its own group.
  double wins = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    std::size_t group_pos = 0, group_neg = 0;
    while (i < order.size() && scores[order[i]] == threshold) {
      labels[order[i]] ? ++group_pos : ++group_neg;
      ++i;
    }
    const std::size_t neg_below = curve.n_neg - fp - group_neg;
    wins += static_cast<double>(group_pos) * static_cast<double>(neg_below) +
            0.5 * static_cast<double>(group_pos) * static_cast<double>(group_neg);
    tp += group_pos;
    fp += group_neg;
    curve.points.push_back({static_cast<double>(fp) / N,
                            static_cast<double>(tp) / P, threshold});
  }
  curve.auroc = wins / (P * N);
  return curve;
}

double TrapezoidArea(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

double TprAtFpr(const RocCurve& curve, double fpr_budget) {
  double best = 0.0;
  for (const RocPoint& p : curve.points) {
    if (p.fpr <= fpr_budget) best = std::max(best, p.tpr);
  }
  return best;
}

double FprAtTpr(const RocCurve& curve, double tpr_target) {
  double best = 1.0;
  for (const RocPoint& p : curve.points) {
    if (p.tpr >= tpr_target) best = std::min(best, p.fpr);
  }
  return best;
}

ClassifierMetrics ComputeClassifierMetrics(std::span<const double> scores,
                                           std::span<const bool> labels) {
  const RocCurve curve = Roc(scores, labels);
  return {curve.auroc, TprAtFpr(curve, 0.05), FprAtTpr(curve, 0.95)};
}

namespace {

std::unique_ptr<bool[]> Flags(const std::vector<bool>& labels) {
  auto flags = std::make_unique<bool[]>(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) flags[i] = labels[i];
  return flags;
}

}  // namespace

RocCurve Roc(std::span<const double> scores, const std::vector<bool>& labels) {
  const auto flags = Flags(labels);
  return Roc(scores, std::span<const bool>(flags.get(), labels.size()));
}

ClassifierMetrics ComputeClassifierMetrics(std::span<const double> scores,
                                           const std::vector<bool>& labels) {
  const auto flags = Flags(labels);
  return ComputeClassifierMetrics(
      scores, std::span<const bool>(flags.get(), labels.size()));
}

double Accuracy(std::span<const double> scores, const std::vector<bool>& labels,
                double threshold) {
  if (scores.empty() || scores.size() != labels.size()) {
    Fail(ErrorKind::kMetric, "accuracy needs equal, nonempty inputs");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if ((scores[i] >= threshold) == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

}  // namespace vp
