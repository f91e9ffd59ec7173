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
#ifndef VP_ENSEMBLE_ENSEMBLE_H_
#define VP_ENSEMBLE_ENSEMBLE_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vp/core/rng.h"
#include "vp/pipeline/report.h"

namespace vp {

struct FeatureMatrix {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<bool> labels;
  std::size_t dropped = 0;  // source items lacking a column

  std::size_t size() const { return rows.size(); }
  FeatureMatrix Subset(std::span<const std::size_t> indices) const;
};

// One row per item that has every column; the rest are counted in
// `dropped`.
FeatureMatrix BuildFeatureMatrix(
    const std::vector<std::map<std::string, double>>& items,
    const std::vector<bool>& labels, const std::vector<std::string>& columns);

// x[feature] <= threshold goes left.
struct Stump {
  int feature = 0;
  double threshold = 0.0;
  double left = 0.0;
  double right = 0.0;

  double Predict(std::span<const double> row) const {
    return row[static_cast<std::size_t>(feature)] <= threshold ? left : right;
  }
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf class fraction
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  double Predict(std::span<const double> row) const;
};

struct StumpEnsemble {
  std::string kind;  // adaboost_r2 | random_forest
  std::vector<std::string> columns;
  std::vector<Stump> stumps;  // boosting
  std::vector<double> weights;
  std::vector<Tree> trees;  // forest

  // Membership confidence in [0, 1]. Throws Error(kInput) on a row of the
  // wrong width.
  double Predict(std::span<const double> row) const;
  // Prediction using only the first `rounds` stumps.
  double PredictStaged(std::span<const double> row, std::size_t rounds) const;
};

// Best single stump under weighted squared error, scanning midpoints of
// adjacent distinct values. Ties keep the lowest feature, then the lowest
// threshold.
Stump FitStump(const std::vector<std::vector<double>>& rows,
               std::span<const double> targets, std::span<const double> weights);

struct AdaBoostOptions {
  int rounds = 100;
  double learning_rate = 1.0;
  // Fit each stump on a weighted bootstrap sample instead of the weighted
  // data itself.
  bool bootstrap = false;
};

// AdaBoost.R2 with linear loss on targets {0, 1}. Stops early on a perfect
// stump or once the weighted loss reaches 0.5.
StumpEnsemble TrainAdaBoost(const FeatureMatrix& data,
                            const AdaBoostOptions& options, Rng& rng);

struct ForestOptions {
  int trees = 500;
  int max_depth = 2;
  int min_leaf = 10;
  int workers = 1;
};

StumpEnsemble TrainRandomForest(const FeatureMatrix& data,
                                const ForestOptions& options, Rng& rng);

// Stratified split: round(test_fraction * class size) of each class go to
// the test side.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
Split StratifiedSplit(const std::vector<bool>& labels, double test_fraction,
                      Rng& rng);

struct BowModel {
  std::vector<std::string> vocabulary;  // sorted
  FeatureMatrix Transform(const std::vector<std::string>& texts) const;
};

// Lowercases and splits on runs of non-alphanumeric ASCII (bytes >= 0x80
// count as word characters).
std::vector<std::string> BowTerms(const std::string& text);

// Keeps terms with document frequency >= ceil(min_doc_fraction * n).
// Throws Error(kTraining) if nothing survives.
BowModel FitBow(const std::vector<std::string>& texts, double min_doc_fraction);

struct EnsembleEvalOptions {
  std::string kind = "adaboost_r2";
  AdaBoostOptions boost;
  ForestOptions forest;
  int repeats = 5;
  double test_fraction = 0.2;
};

StumpEnsemble TrainEnsemble(const FeatureMatrix& data,
                            const EnsembleEvalOptions& options, Rng& rng);

// Per-feature and ensemble test metrics averaged over repeated stratified
// splits. Rows: one per column, then "ensemble".
ReportTable EvaluateEnsemble(const FeatureMatrix& data,
                             const EnsembleEvalOptions& options, Rng& rng,
                             std::string name = "ensemble");

// Bag-of-words random forest: vocabulary fitted on each training split.
// Row "bow".
ReportTable EvaluateBow(const std::vector<std::string>& texts,
                        const std::vector<bool>& labels,
                        double min_doc_fraction,
                        const EnsembleEvalOptions& options, Rng& rng,
                        std::string name = "bow");

std::string EnsembleToJson(const StumpEnsemble& ensemble);
StumpEnsemble EnsembleFromJson(const std::string& text);
void SaveEnsemble(const StumpEnsemble& ensemble,
                  const std::filesystem::path& path);
StumpEnsemble LoadEnsemble(const std::filesystem::path& path);

}  // namespace vp

#endif  // VP_ENSEMBLE_ENSEMBLE_H_
