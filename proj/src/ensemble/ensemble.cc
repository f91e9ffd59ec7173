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
#include "vp/ensemble/ensemble.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>

#include "vp/core/error.h"
#include "vp/core/parallel.h"
#include "vp/core/text.h"
#include "vp/eval/metrics.h"

namespace vp {
namespace {

using nlohmann::json;

void RequireBothClasses(const std::vector<bool>& labels) {
  const auto pos = std::count(labels.begin(), labels.end(), true);
  if (pos == 0 || pos == static_cast<std::ptrdiff_t>(labels.size())) {
    Fail(ErrorKind::kTraining,
         fmt::format("training needs both classes (positives {}, negatives {})",
                     pos, static_cast<std::ptrdiff_t>(labels.size()) - pos));
  }
}

void CheckWidth(const StumpEnsemble& e, std::span<const double> row) {
  if (row.size() != e.columns.size()) {
    Fail(ErrorKind::kInput, fmt::format("feature row has {} values, model expects {}",
                                        row.size(), e.columns.size()));
  }
}

double Midpoint(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return mid < b ? mid : a;
}

double Gini(double pos, double n) {
  if (n <= 0.0) return 0.0;
  const double p = pos / n;
  return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& data, const ForestOptions& options, Rng& rng)
      : data_(data), options_(options), rng_(rng) {}

  Tree Build(std::vector<std::size_t> sample) {
    Grow(std::move(sample), 0);
    return std::move(tree_);
  }

 private:
  int Grow(std::vector<std::size_t> idx, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double pos = 0.0;
    for (std::size_t i : idx) pos += data_.labels[i] ? 1.0 : 0.0;
    const double n = static_cast<double>(idx.size());
    tree_.nodes[id].value = n > 0 ? pos / n : 0.5;
    const std::size_t min_leaf = static_cast<std::size_t>(options_.min_leaf);
    if (depth >= options_.max_depth || idx.size() < 2 * min_leaf ||
        pos == 0.0 || pos == n) {
      return id;
    }
    const std::size_t d = data_.columns.size();
    const std::size_t mtry =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
    std::vector<std::size_t> features(d);
    std::iota(features.begin(), features.end(), std::size_t{0});
    for (std::size_t i = 0; i < mtry; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_.Below(d - i));
      std::swap(features[i], features[j]);
    }
    features.resize(mtry);
    std::sort(features.begin(), features.end());

    double best = n * Gini(pos, n) - 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;
    for (std::size_t f : features) {
      std::vector<std::size_t> order = idx;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return data_.rows[a][f] < data_.rows[b][f];
      });
      double left_pos = 0.0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        left_pos += data_.labels[order[k]] ? 1.0 : 0.0;
        const double a = data_.rows[order[k]][f];
        const double b = data_.rows[order[k + 1]][f];
        const std::size_t nl = k + 1;
        const std::size_t nr = order.size() - nl;
        if (a == b || nl < min_leaf || nr < min_leaf) continue;
        const double impurity =
            static_cast<double>(nl) * Gini(left_pos, static_cast<double>(nl)) +
            static_cast<double>(nr) * Gini(pos - left_pos, static_cast<double>(nr));
        if (impurity < best) {
          best = impurity;
          best_feature = static_cast<int>(f);
          best_threshold = Midpoint(a, b);
        }
      }
    }
    if (best_feature < 0) return id;
    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) {
      (data_.rows[i][static_cast<std::size_t>(best_feature)] <= best_threshold
           ? left
           : right)
          .push_back(i);
    }
    tree_.nodes[id].feature = best_feature;
    tree_.nodes[id].threshold = best_threshold;
    const int l = Grow(std::move(left), depth + 1);
    const int r = Grow(std::move(right), depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  const FeatureMatrix& data_;
  const ForestOptions& options_;
  Rng& rng_;
  Tree tree_;
};

json StumpToJson(const Stump& s) {
  return {{"feature", s.feature}, {"threshold", s.threshold},
          {"left", s.left}, {"right", s.right}};
}

}  // namespace

FeatureMatrix FeatureMatrix::Subset(std::span<const std::size_t> indices) const {
  FeatureMatrix out;
  out.columns = columns;
  for (std::size_t i : indices) {
    out.rows.push_back(rows[i]);
    out.labels.push_back(labels[i]);
  }
  return out;
}

FeatureMatrix BuildFeatureMatrix(
    const std::vector<std::map<std::string, double>>& items,
    const std::vector<bool>& labels, const std::vector<std::string>& columns) {
  if (items.size() != labels.size()) {
    Fail(ErrorKind::kInput, "feature items and labels differ in length");
  }
  FeatureMatrix m;
  m.columns = columns;
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::vector<double> row;
    for (const std::string& c : columns) {
      const auto it = items[i].find(c);
      if (it == items[i].end() || !std::isfinite(it->second)) break;
      row.push_back(it->second);
    }
    if (row.size() != columns.size()) {
      ++m.dropped;
      continue;
    }
    m.rows.push_back(std::move(row));
    m.labels.push_back(labels[i]);
  }
  return m;
}

double Tree::Predict(std::span<const double> row) const {
  int id = 0;
  while (nodes[id].feature >= 0) {
    id = row[static_cast<std::size_t>(nodes[id].feature)] <= nodes[id].threshold
             ? nodes[id].left
             : nodes[id].right;
  }
  return nodes[id].value;
}

double StumpEnsemble::Predict(std::span<const double> row) const {
  if (kind == "random_forest") {
    CheckWidth(*this, row);
    if (trees.empty()) Fail(ErrorKind::kInput, "forest has no trees");
    double sum = 0.0;
    for (const Tree& t : trees) sum += t.Predict(row);
    return std::clamp(sum / static_cast<double>(trees.size()), 0.0, 1.0);
  }
  return PredictStaged(row, stumps.size());
}

double StumpEnsemble::PredictStaged(std::span<const double> row,
                                    std::size_t rounds) const {
  CheckWidth(*this, row);
  rounds = std::min(rounds, stumps.size());
  if (rounds == 0) Fail(ErrorKind::kInput, "ensemble has no stumps");
  std::vector<std::pair<double, double>> preds;  // (value, weight)
  double total = 0.0;
  for (std::size_t m = 0; m < rounds; ++m) {
    preds.emplace_back(stumps[m].Predict(row), weights[m]);
    total += weights[m];
  }
  std::sort(preds.begin(), preds.end());
  double cumulative = 0.0;
  for (const auto& [value, weight] : preds) {
    cumulative += weight;
    if (cumulative >= 0.5 * total) return std::clamp(value, 0.0, 1.0);
  }
  return std::clamp(preds.back().first, 0.0, 1.0);
}

Stump FitStump(const std::vector<std::vector<double>>& rows,
               std::span<const double> targets, std::span<const double> weights) {
  if (rows.empty() || rows.front().empty()) {
    Fail(ErrorKind::kTraining, "cannot fit a stump without rows and features");
  }
  const std::size_t n = rows.size();
  const std::size_t d = rows.front().size();
  double W = 0.0, S = 0.0, Q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    W += weights[i];
    S += weights[i] * targets[i];
    Q += weights[i] * targets[i] * targets[i];
  }
  if (!(W > 0.0)) Fail(ErrorKind::kTraining, "stump weights sum to zero");
  Stump best;
  best.threshold = rows.front()[0];
  for (const auto& r : rows) best.threshold = std::max(best.threshold, r[0]);
  best.left = best.right = S / W;
  double best_sse = Q - S * S / W;
  bool found = false;
  std::vector<std::size_t> order(n);
  for (std::size_t f = 0; f < d; ++f) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return rows[a][f] < rows[b][f];
    });
    double wl = 0.0, sl = 0.0, ql = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const std::size_t i = order[k];
      wl += weights[i];
      sl += weights[i] * targets[i];
      ql += weights[i] * targets[i] * targets[i];
      const double a = rows[i][f];
      const double b = rows[order[k + 1]][f];
      if (a == b) continue;
      const double wr = W - wl, sr = S - sl, qr = Q - ql;
      const double sse = (wl > 0.0 ? ql - sl * sl / wl : 0.0) +
                         (wr > 0.0 ? qr - sr * sr / wr : 0.0);
      if (!found || sse < best_sse) {
        found = true;
        best_sse = sse;
        best.feature = static_cast<int>(f);
        best.threshold = Midpoint(a, b);
        best.left = wl > 0.0 ? sl / wl : 0.0;
        best.right = wr > 0.0 ? sr / wr : 0.0;
      }
    }
  }
  return best;
}

StumpEnsemble TrainAdaBoost(const FeatureMatrix& data,
                            const AdaBoostOptions& options, Rng& rng) {
  if (options.rounds < 1) Fail(ErrorKind::kTraining, "rounds must be >= 1");
  if (!(options.learning_rate > 0.0)) {
    Fail(ErrorKind::kTraining, "learning_rate must be > 0");
  }
  RequireBothClasses(data.labels);
  const std::size_t n = data.size();
  std::vector<double> y(n), w(n, 1.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) y[i] = data.labels[i] ? 1.0 : 0.0;

  StumpEnsemble e;
  e.kind = "adaboost_r2";
  e.columns = data.columns;
  for (int m = 0; m < options.rounds; ++m) {
    Stump stump;
    if (options.bootstrap) {
      // Draw n rows with probability w; the fit weights become draw counts.
      std::vector<double> cumulative(n);
      std::partial_sum(w.begin(), w.end(), cumulative.begin());
      std::vector<double> counts(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        const double u = rng.Uniform() * cumulative.back();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        counts[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), n - 1)] += 1.0;
      }
      stump = FitStump(data.rows, y, counts);
    } else {
      stump = FitStump(data.rows, y, w);
    }
    std::vector<double> err(n);
    double max_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err[i] = std::abs(stump.Predict(data.rows[i]) - y[i]);
      max_err = std::max(max_err, err[i]);
    }
    if (max_err <= 0.0) {
      e.stumps.push_back(stump);
      e.weights.push_back(1.0);
      break;
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) loss += w[i] * err[i] / max_err;
    if (loss <= 0.0) {
      e.stumps.push_back(stump);
      e.weights.push_back(1.0);
      break;
    }
    if (loss >= 0.5) {
      if (e.stumps.empty()) {
        e.stumps.push_back(stump);
        e.weights.push_back(1.0);
      }
      break;
    }
    const double beta = loss / (1.0 - loss);
    e.stumps.push_back(stump);
    e.weights.push_back(options.learning_rate * std::log(1.0 / beta));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] *= std::pow(beta, (1.0 - err[i] / max_err) * options.learning_rate);
      total += w[i];
    }
    for (double& wi : w) wi /= total;
  }
  return e;
}

StumpEnsemble TrainRandomForest(const FeatureMatrix& data,
                                const ForestOptions& options, Rng& rng) {
  if (options.trees < 1 || options.max_depth < 1 || options.min_leaf < 1) {
    Fail(ErrorKind::kTraining, "forest parameters must be positive");
  }
  RequireBothClasses(data.labels);
  StumpEnsemble e;
  e.kind = "random_forest";
  e.columns = data.columns;
  e.trees.resize(static_cast<std::size_t>(options.trees));
  const std::uint64_t base = rng.Next();
  const std::size_t n = data.size();
  ParallelFor(e.trees.size(), options.workers, [&](std::size_t t) {
    Rng tree_rng = SeededRng(base, fmt::format("tree/{}", t));
    std::vector<std::size_t> sample(n);
    for (std::size_t& s : sample) s = static_cast<std::size_t>(tree_rng.Below(n));
    std::sort(sample.begin(), sample.end());
    e.trees[t] = TreeBuilder(data, options, tree_rng).Build(std::move(sample));
  });
  return e;
}

Split StratifiedSplit(const std::vector<bool>& labels, double test_fraction,
                      Rng& rng) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] ? pos : neg).push_back(i);
  }
  Split split;
  for (std::vector<std::size_t>* cls : {&pos, &neg}) {
    rng.Shuffle(std::span<std::size_t>(*cls));
    std::size_t k = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(cls->size())));
    if (cls->size() >= 2) k = std::clamp<std::size_t>(k, 1, cls->size() - 1);
    split.test.insert(split.test.end(), cls->begin(), cls->begin() + static_cast<std::ptrdiff_t>(k));
    split.train.insert(split.train.end(), cls->begin() + static_cast<std::ptrdiff_t>(k), cls->end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<std::string> BowTerms(const std::string& text) {
  const std::string lower = ToLowerUtf8(text);
  std::vector<std::string> terms;
  std::string current;
  for (char ch : lower) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || std::isalnum(c)) {
      current += ch;
    } else if (!current.empty()) {
      terms.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) terms.push_back(std::move(current));
  return terms;
}

BowModel FitBow(const std::vector<std::string>& texts, double min_doc_fraction) {
  if (texts.empty()) Fail(ErrorKind::kInput, "bag-of-words needs documents");
  std::map<std::string, std::size_t> df;
  for (const std::string& t : texts) {
    const std::vector<std::string> terms = BowTerms(t);
    for (const std::string& term : std::set<std::string>(terms.begin(), terms.end())) {
      ++df[term];
    }
  }
  const double floor_df =
      std::ceil(min_doc_fraction * static_cast<double>(texts.size()) - 1e-9);
  BowModel model;
  for (const auto& [term, count] : df) {
    if (static_cast<double>(count) >= floor_df) model.vocabulary.push_back(term);
  }
  if (model.vocabulary.empty()) {
    Fail(ErrorKind::kTraining,
         fmt::format("no term appears in >= {} of {} documents; lower "
                     "bow_min_doc_fraction (now {})",
                     floor_df, texts.size(), min_doc_fraction));
  }
  return model;
}

FeatureMatrix BowModel::Transform(const std::vector<std::string>& texts) const {
  FeatureMatrix m;
  m.columns = vocabulary;
  for (const std::string& t : texts) {
    std::vector<double> row(vocabulary.size(), 0.0);
    for (const std::string& term : BowTerms(t)) {
      const auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), term);
      if (it != vocabulary.end() && *it == term) {
        row[static_cast<std::size_t>(it - vocabulary.begin())] = 1.0;
      }
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

StumpEnsemble TrainEnsemble(const FeatureMatrix& data,
                            const EnsembleEvalOptions& options, Rng& rng) {
  if (options.kind == "random_forest") {
    return TrainRandomForest(data, options.forest, rng);
  }
  if (options.kind != "adaboost_r2") {
    Fail(ErrorKind::kConfig, "unknown ensemble kind " + options.kind);
  }
  return TrainAdaBoost(data, options.boost, rng);
}

ReportTable EvaluateEnsemble(const FeatureMatrix& data,
                             const EnsembleEvalOptions& options, Rng& rng,
                             std::string name) {
  RequireBothClasses(data.labels);
  const std::size_t d = data.columns.size();
  std::vector<ClassifierMetrics> feature_sum(d);
  ClassifierMetrics ens_sum;
  double accuracy = 0.0;
  for (int r = 0; r < options.repeats; ++r) {
    const Split split = StratifiedSplit(data.labels, options.test_fraction, rng);
    const FeatureMatrix train = data.Subset(split.train);
    const FeatureMatrix test = data.Subset(split.test);
    const StumpEnsemble model = TrainEnsemble(train, options, rng);
    std::vector<double> pred;
    for (const auto& row : test.rows) pred.push_back(model.Predict(row));
    const ClassifierMetrics m = ComputeClassifierMetrics(pred, test.labels);
    ens_sum.auroc += m.auroc;
    ens_sum.tpr_at_05fpr += m.tpr_at_05fpr;
    ens_sum.fpr_at_95tpr += m.fpr_at_95tpr;
    accuracy += Accuracy(pred, test.labels, 0.5);
    for (std::size_t f = 0; f < d; ++f) {
      std::vector<double> col;
      for (const auto& row : test.rows) col.push_back(row[f]);
      const ClassifierMetrics fm = ComputeClassifierMetrics(col, test.labels);
      feature_sum[f].auroc += fm.auroc;
      feature_sum[f].tpr_at_05fpr += fm.tpr_at_05fpr;
      feature_sum[f].fpr_at_95tpr += fm.fpr_at_95tpr;
    }
  }
  const double k = static_cast<double>(options.repeats);
  ReportTable table;
  table.name = std::move(name);
  table.key_columns = {"method"};
  table.value_columns = {kMetricAuroc, kMetricTpr, kMetricFpr};
  for (std::size_t f = 0; f < d; ++f) {
    table.rows.push_back({{data.columns[f]},
                          {feature_sum[f].auroc / k, feature_sum[f].tpr_at_05fpr / k,
                           feature_sum[f].fpr_at_95tpr / k}});
  }
  table.rows.push_back({{"ensemble"},
                        {ens_sum.auroc / k, ens_sum.tpr_at_05fpr / k,
                         ens_sum.fpr_at_95tpr / k}});
  table.notes.push_back(fmt::format(
      "{} ({} rows, {} dropped for missing scores), {} stratified splits with "
      "test fraction {}",
      options.kind, data.size(), data.dropped, options.repeats,
      options.test_fraction));
  table.notes.push_back(fmt::format("ensemble accuracy at 0.5: {:.4f}", accuracy / k));
  return table;
}

ReportTable EvaluateBow(const std::vector<std::string>& texts,
                        const std::vector<bool>& labels,
                        double min_doc_fraction,
                        const EnsembleEvalOptions& options, Rng& rng,
                        std::string name) {
  if (texts.size() != labels.size()) {
    Fail(ErrorKind::kInput, "bag-of-words texts and labels differ in length");
  }
  RequireBothClasses(labels);
  ClassifierMetrics sum;
  std::size_t vocab_total = 0;
  for (int r = 0; r < options.repeats; ++r) {
    const Split split = StratifiedSplit(labels, options.test_fraction, rng);
    std::vector<std::string> train_texts, test_texts;
    std::vector<bool> train_labels, test_labels;
    for (std::size_t i : split.train) {
      train_texts.push_back(texts[i]);
      train_labels.push_back(labels[i]);
    }
    for (std::size_t i : split.test) {
      test_texts.push_back(texts[i]);
      test_labels.push_back(labels[i]);
    }
    const BowModel bow = FitBow(train_texts, min_doc_fraction);
    vocab_total += bow.vocabulary.size();
    FeatureMatrix train = bow.Transform(train_texts);
    train.labels = train_labels;
    const FeatureMatrix test = bow.Transform(test_texts);
    const StumpEnsemble forest = TrainRandomForest(train, options.forest, rng);
    std::vector<double> pred;
    for (const auto& row : test.rows) pred.push_back(forest.Predict(row));
    const ClassifierMetrics m = ComputeClassifierMetrics(pred, test_labels);
    sum.auroc += m.auroc;
    sum.tpr_at_05fpr += m.tpr_at_05fpr;
    sum.fpr_at_95tpr += m.fpr_at_95tpr;
  }
  const double k = static_cast<double>(options.repeats);
  ReportTable table;
  table.name = std::move(name);
  table.key_columns = {"method"};
  table.value_columns = {kMetricAuroc, kMetricTpr, kMetricFpr};
  table.rows.push_back({{"bow"}, {sum.auroc / k, sum.tpr_at_05fpr / k, sum.fpr_at_95tpr / k}});
  table.notes.push_back(fmt::format(
      "random forest over unigram presence, mean vocabulary {:.1f} terms, {} splits",
      static_cast<double>(vocab_total) / k, options.repeats));
  return table;
}

std::string EnsembleToJson(const StumpEnsemble& e) {
  json j;
  j["kind"] = e.kind;
  j["columns"] = e.columns;
  j["stumps"] = json::array();
  for (const Stump& s : e.stumps) j["stumps"].push_back(StumpToJson(s));
  j["weights"] = e.weights;
  j["trees"] = json::array();
  for (const Tree& t : e.trees) {
    json nodes = json::array();
    for (const TreeNode& n : t.nodes) {
      nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold},
                       {"left", n.left}, {"right", n.right}, {"value", n.value}});
    }
    j["trees"].push_back(nodes);
  }
  return j.dump() + "\n";
}

StumpEnsemble EnsembleFromJson(const std::string& text) {
  StumpEnsemble e;
  try {
    const json j = json::parse(text);
    e.kind = j.at("kind").get<std::string>();
    e.columns = j.at("columns").get<std::vector<std::string>>();
    for (const json& s : j.at("stumps")) {
      e.stumps.push_back({s.at("feature").get<int>(), s.at("threshold").get<double>(),
                          s.at("left").get<double>(), s.at("right").get<double>()});
    }
    e.weights = j.at("weights").get<std::vector<double>>();
    for (const json& t : j.at("trees")) {
      Tree tree;
      for (const json& n : t) {
        tree.nodes.push_back({n.at("feature").get<int>(), n.at("threshold").get<double>(),
                              n.at("left").get<int>(), n.at("right").get<int>(),
                              n.at("value").get<double>()});
      }
      e.trees.push_back(std::move(tree));
    }
  } catch (const json::exception& ex) {
    Fail(ErrorKind::kParse, std::string("ensemble file: ") + ex.what());
  }
  if (e.kind != "adaboost_r2" && e.kind != "random_forest") {
    Fail(ErrorKind::kSchema, "ensemble file has unknown kind " + e.kind);
  }
  if (e.stumps.size() != e.weights.size()) {
    Fail(ErrorKind::kSchema, "ensemble file: stumps and weights differ in count");
  }
  const int d = static_cast<int>(e.columns.size());
  for (const Stump& s : e.stumps) {
    if (s.feature < 0 || s.feature >= d) {
      Fail(ErrorKind::kSchema, "ensemble file: stump feature out of range");
    }
  }
  for (const Tree& t : e.trees) {
    const int n = static_cast<int>(t.nodes.size());
    if (n == 0) Fail(ErrorKind::kSchema, "ensemble file: empty tree");
    for (int i = 0; i < n; ++i) {
      const TreeNode& node = t.nodes[i];
      if (node.feature < 0) continue;
      if (node.feature >= d || node.left <= i || node.right <= i ||
          node.left >= n || node.right >= n) {
        Fail(ErrorKind::kSchema, "ensemble file: malformed tree node");
      }
    }
  }
  return e;
}

void SaveEnsemble(const StumpEnsemble& ensemble, const std::filesystem::path& path) {
  WriteTextFile(path, EnsembleToJson(ensemble));
}

StumpEnsemble LoadEnsemble(const std::filesystem::path& path) {
  return EnsembleFromJson(ReadTextFile(path));
}

}  // namespace vp
