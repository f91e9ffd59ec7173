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
#ifndef VP_EVAL_METRICS_H_
#define VP_EVAL_METRICS_H_

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vp/core/types.h"

namespace vp {

// Metric identifiers used in artifacts and reports.
inline constexpr const char* kMetricMp = "mp";
inline constexpr const char* kMetricMhCount = "mh_count";
inline constexpr const char* kMetricMhNormalized = "mh_normalized";
inline constexpr const char* kMetricAuroc = "auroc";
inline constexpr const char* kMetricTpr = "tpr_at_05fpr";
inline constexpr const char* kMetricFpr = "fpr_at_95tpr";

using SequenceMap = std::map<std::string, TokenSeq>;

// Fraction of examples whose top-1 equals the truth token for token.
// Throws Error(kInput) on empty or mismatched key sets.
double PrecisionMp(const SequenceMap& top1, const SequenceMap& truth);

struct HammingResult {
  double count = 0.0;       // mean differing positions per example
  double normalized = 0.0;  // mean of count / |truth|
};

// Positions are compared over max(|x|, |y|); a missing position counts as
// a mismatch, so M_H = 0 exactly when every sequence matches.
HammingResult HammingMh(const SequenceMap& top1, const SequenceMap& truth);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // +inf for the initial (0, 0) point
};

// Empirical ROC over distinct score thresholds, descending. Starts at
// (0, 0) and ends at (1, 1).
struct RocCurve {
  std::vector<RocPoint> points;
  double auroc = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
};

// AUROC is the rank statistic (wins + ties / 2) / (n_pos * n_neg).
// Throws Error(kMetric) when a class is absent or a score is not finite.
RocCurve Roc(std::span<const double> scores, std::span<const bool> labels);

double TrapezoidArea(const RocCurve& curve);

// Max TPR over points with FPR <= budget (no interpolation); 0 if none.
double TprAtFpr(const RocCurve& curve, double fpr_budget = 0.05);

// Min FPR over points with TPR >= target; the terminal point gives 1.
double FprAtTpr(const RocCurve& curve, double tpr_target = 0.95);

struct ClassifierMetrics {
  double auroc = 0.0;
  double tpr_at_05fpr = 0.0;
  double fpr_at_95tpr = 0.0;
};

ClassifierMetrics ComputeClassifierMetrics(std::span<const double> scores,
                                           std::span<const bool> labels);

// Conveniences for std::vector<bool> labels.
RocCurve Roc(std::span<const double> scores, const std::vector<bool>& labels);
ClassifierMetrics ComputeClassifierMetrics(std::span<const double> scores,
                                           const std::vector<bool>& labels);

// Accuracy of thresholding `scores` at `threshold` (>= is positive).
double Accuracy(std::span<const double> scores, const std::vector<bool>& labels,
                double threshold);

}  // namespace vp

#endif  // VP_EVAL_METRICS_H_
