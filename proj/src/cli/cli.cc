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
#include "vp/cli/cli.h"

#include <filesystem>
#include <optional>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "vp/cli/selftest.h"
#include "vp/core/artifact.h"
#include "vp/core/error.h"
#include "vp/ensemble/ensemble.h"
#include "vp/eval/metrics.h"
#include "vp/memlab/lab.h"
#include "vp/pipeline/config.h"
#include "vp/pipeline/pipeline.h"
#include "vp/pipeline/report.h"

namespace vp {
namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> workers;
  std::string out;
};

void AddCommon(CLI::App* sub, CommonOptions& o) {
  sub->add_option("-c,--config", o.config, "run configuration (TOML)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--set", o.sets, "override, e.g. scores.min_k_fraction=0.3");
  sub->add_option("--seed", o.seed, "generation.seed");
  sub->add_option("--trials", o.trials, "generation.trials");
  sub->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  sub->add_option("-o,--out", o.out, "output directory");
}

RunConfig LoadConfig(const CommonOptions& o, std::vector<std::string> extra = {}) {
  std::vector<std::string> overrides = o.sets;
  overrides.insert(overrides.end(), extra.begin(), extra.end());
  if (o.seed) overrides.push_back(fmt::format("generation.seed={}", *o.seed));
  if (o.trials) overrides.push_back(fmt::format("generation.trials={}", *o.trials));
  if (o.workers) overrides.push_back(fmt::format("workers={}", *o.workers));
  RunConfig config = LoadRunConfig(o.config, overrides);
  ApplyEnvironment(config);
  config.Validate();
  return config;
}

fs::path OutDir(const CommonOptions& o, const RunConfig& config,
                const std::string& sub) {
  return o.out.empty() ? fs::path(config.report.out_dir) / sub : fs::path(o.out);
}

void Emit(const ReportTable& table, const RunConfig& config, const fs::path& dir,
          std::ostream& out) {
  EmitReport(table, config.report.formats, dir);
  out << "## " << table.name << "\n\n" << FormatMarkdown(table) << "\n";
}

std::map<std::string, double> TableMetrics(const ReportTable& table) {
  std::map<std::string, double> m;
  for (const ReportTable::Row& row : table.rows) {
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      if (std::isfinite(row.values[i])) {
        m[table.value_columns[i] + "/" + row.keys.front()] = row.values[i];
      }
    }
  }
  return m;
}

void WriteSummary(const fs::path& dir, const std::vector<ReportTable>& tables) {
  std::string text;
  for (const ReportTable& t : tables) {
    text += "## " + t.name + "\n\n" + FormatMarkdown(t) + "\n";
  }
  WriteTextFile(dir / "summary.md", text);
}

// Suffix-only confirmation set used by the ensemble and bag-of-words verbs.
ConfirmationSet SuffixOnlySet(const Pipeline& p, std::vector<std::string>& methods) {
  auto pools = GeneratePools(p, p.config.seed());
  ScorePools(p, pools, p.config.scores, {std::string(kLikelihood)});
  methods = UsableScores(p, ScoreMode::kSuffixOnly);
  ConfirmationSet set =
      BuildConfirmationSet(p, pools, p.config.scores, ScoreMode::kSuffixOnly, methods);
  RequireBothClasses(set);
  return set;
}

EnsembleEvalOptions EnsembleOptions(const RunConfig& c) {
  EnsembleEvalOptions o;
  o.kind = c.ensemble.kind;
  o.boost = {c.ensemble.rounds, c.ensemble.learning_rate, c.ensemble.bootstrap};
  o.forest = {c.ensemble.trees, c.ensemble.max_depth, c.ensemble.min_leaf, c.workers};
  o.repeats = c.ensemble.repeats;
  o.test_fraction = c.ensemble.test_fraction;
  return o;
}

RunArtifact TableArtifact(const RunConfig& config, const std::string& run_id,
                          const std::vector<ReportTable>& tables) {
  RunArtifact a;
  a.run_id = run_id;
  a.config_snapshot = SnapshotToml(config);
  a.seed = config.seed();
  for (const ReportTable& t : tables) a.metrics.merge(TableMetrics(t));
  return a;
}

int CmdGenerate(const CommonOptions& o, std::ostream& out) {
  const RunConfig config = LoadConfig(o);
  const Pipeline p = OpenPipeline(config);
  const fs::path dir = OutDir(o, config, "generate");
  auto pools = GeneratePools(p, config.seed());
  RunArtifact a;
  a.run_id = fmt::format("generate-{}", config.seed());
  a.config_snapshot = SnapshotToml(config);
  a.seed = config.seed();
  std::size_t hits = 0, total = 0;
  for (std::size_t i = 0; i < pools.size(); ++i) {
    bool found = false;
    for (ScoredCandidate& c : pools[i]) {
      found = found || c.tokens == p.examples[i].suffix_tokens;
      ++total;
      a.records.push_back(std::move(c));
    }
    a.labels[p.examples[i].id] = found;
    hits += found ? 1 : 0;
  }
  a.metrics["candidates"] = static_cast<double>(total);
  a.metrics["truth_in_pool"] =
      static_cast<double>(hits) / static_cast<double>(p.examples.size());
  SaveArtifact(a, dir);
  out << fmt::format("generated {} candidates for {} examples; true suffix in "
                     "pool for {} examples\nartifact: {}\n",
                     total, p.examples.size(), hits, dir.string());
  return 0;
}

int CmdRank(const CommonOptions& o, const std::vector<std::string>& rankers,
            std::ostream& out) {
  const RunConfig config = LoadConfig(o);
  const Pipeline p = OpenPipeline(config);
  const fs::path dir = OutDir(o, config, "rank");
  const RankingOutcome r = RunRanking(p, rankers, dir);
  Emit(r.table, config, dir, out);
  WriteSummary(dir, {r.table});
  return 0;
}

int CmdConfirm(const CommonOptions& o, std::ostream& out) {
  const RunConfig config = LoadConfig(o);
  const Pipeline p = OpenPipeline(config);
  const fs::path dir = OutDir(o, config, "confirm");
  const ConfirmationOutcome r = RunConfirmation(p, dir);
  for (const ReportTable& t : r.tables) Emit(t, config, dir, out);
  WriteSummary(dir, r.tables);
  return 0;
}

int CmdSweep(const CommonOptions& o, const std::string& axis,
             const std::vector<double>& values, std::ostream& out) {
  std::vector<std::string> extra;
  if (!axis.empty()) extra.push_back("sweep.axis=\"" + axis + "\"");
  if (!values.empty()) {
    std::string list;
    for (double v : values) list += (list.empty() ? "" : ", ") + fmt::format("{}", v);
    extra.push_back("sweep.values=[" + list + "]");
  }
  const RunConfig config = LoadConfig(o, extra);
  const Pipeline p = OpenPipeline(config);
  const fs::path dir = OutDir(o, config, "sweep");
  const SweepOutcome r = RunSweep(p, dir);
  Emit(r.table, config, dir, out);
  WriteTextFile(dir / (r.table.name + "_plot.json"), r.plot_json);
  WriteSummary(dir, {r.table});
  out << fmt::format("model calls after the first sweep value: {}\n",
                     r.calls_after_first_value);
  return 0;
}

int CmdEnsembleTrain(const CommonOptions& o, std::ostream& out) {
  const RunConfig config = LoadConfig(o);
  const Pipeline p = OpenPipeline(config);
  const fs::path dir = OutDir(o, config, "ensemble");
  std::vector<std::string> methods;
  const ConfirmationSet set = SuffixOnlySet(p, methods);
  std::vector<std::map<std::string, double>> items;
  std::vector<bool> labels;
  for (const ConfirmationItem& item : set.items) {
    items.push_back(item.top1.scores);
    labels.push_back(item.label);
  }
  const FeatureMatrix features = BuildFeatureMatrix(items, labels, methods);
  const EnsembleEvalOptions options = EnsembleOptions(config);
  Rng rng = SeededRng(config.seed(), "ensemble");
  const ReportTable table = EvaluateEnsemble(features, options, rng, "ensemble");
  const StumpEnsemble model = TrainEnsemble(features, options, rng);
  SaveEnsemble(model, dir / "model.json");
  SaveArtifact(TableArtifact(config, fmt::format("ensemble-{}", config.seed()), {table}),
               dir);
  Emit(table, config, dir, out);
  WriteSummary(dir, {table});
  out << "model: " << (dir / "model.json").string() << "\n";
  return 0;
}

int CmdEnsembleEval(const CommonOptions& o, const std::string& model_path,
                    std::ostream& out) {
  const RunConfig config = LoadConfig(o);
  const StumpEnsemble model = LoadEnsemble(model_path);
  const Pipeline p = OpenPipeline(config);
  const fs::path dir = OutDir(o, config, "ensemble_eval");
  std::vector<std::string> methods;
  const ConfirmationSet set = SuffixOnlySet(p, methods);
  std::vector<std::map<std::string, double>> items;
  std::vector<bool> labels;
  for (const ConfirmationItem& item : set.items) {
    items.push_back(item.top1.scores);
    labels.push_back(item.label);
  }
  const FeatureMatrix features = BuildFeatureMatrix(items, labels, model.columns);
  std::vector<double> pred;
  for (const auto& row : features.rows) pred.push_back(model.Predict(row));
  const ClassifierMetrics m = ComputeClassifierMetrics(pred, features.labels);
  ReportTable table;
  table.name = "ensemble_eval";
  table.key_columns = {"method"};
  table.value_columns = {kMetricAuroc, kMetricTpr, kMetricFpr};
  table.rows.push_back({{"ensemble"}, {m.auroc, m.tpr_at_05fpr, m.fpr_at_95tpr}});
  table.notes.push_back(fmt::format(
      "{} rows scored, {} dropped for missing scores, accuracy at 0.5: {:.4f}",
      features.size(), features.dropped, Accuracy(pred, features.labels, 0.5)));
  SaveArtifact(TableArtifact(config, fmt::format("ensemble-eval-{}", config.seed()),
                             {table}),
               dir);
  Emit(table, config, dir, out);
  WriteSummary(dir, {table});
  return 0;
}

int CmdBow(const CommonOptions& o, std::ostream& out) {
  const RunConfig config = LoadConfig(o);
  const Pipeline p = OpenPipeline(config);
  const fs::path dir = OutDir(o, config, "bow");
  std::vector<std::string> methods;
  const ConfirmationSet set = SuffixOnlySet(p, methods);
  std::vector<std::string> texts;
  std::vector<bool> labels;
  for (const ConfirmationItem& item : set.items) {
    const ExtractionExample& e = p.Example(item.top1.example_id);
    const std::string prefix =
        e.prefix_text ? *e.prefix_text : p.model->Detokenize(e.prefix_tokens);
    texts.push_back(prefix + p.model->Detokenize(item.top1.tokens));
    labels.push_back(item.label);
  }
  EnsembleEvalOptions options = EnsembleOptions(config);
  options.kind = "random_forest";
  Rng rng = SeededRng(config.seed(), "bow");
  const ReportTable table =
      EvaluateBow(texts, labels, config.ensemble.bow_min_doc_fraction, options, rng);
  SaveArtifact(TableArtifact(config, fmt::format("bow-{}", config.seed()), {table}),
               dir);
  Emit(table, config, dir, out);
  WriteSummary(dir, {table});
  return 0;
}

int CmdLab(const CommonOptions& o, std::ostream& out) {
  const RunConfig config = LoadConfig(o);
  const fs::path dir = OutDir(o, config, "lab");
  const LabOutcome r = RunLab(config);
  SaveArtifact(TableArtifact(config, "lab", {r.extraction, r.mia}), dir);
  Emit(r.extraction, config, dir, out);
  Emit(r.mia, config, dir, out);
  WriteSummary(dir, {r.extraction, r.mia});
  return 0;
}

int CmdReport(const std::vector<std::string>& artifacts, const std::string& out_dir,
              const std::vector<std::string>& formats, std::ostream& out) {
  for (const std::string& path : artifacts) {
    const RunArtifact a = LoadArtifact(path);
    const ReportTable table = TableFromArtifact(a, a.run_id);
    const fs::path dir = out_dir.empty() ? fs::path(path) : fs::path(out_dir);
    EmitReport(table, formats, dir);
    out << "## " << table.name << "\n\n" << FormatMarkdown(table) << "\n";
  }
  return 0;
}

int CmdSelftest(std::ostream& out) {
  bool ok = true;
  for (const CheckResult& r : RunSelftest()) {
    out << fmt::format("{} {} ({}, {:.2f}s)\n", r.passed ? "PASS" : "FAIL", r.name,
                       r.detail, r.seconds);
    ok = ok && r.passed;
  }
  return ok ? 0 : 2;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Targeted training-data extraction audits", "vp"};
  app.require_subcommand(1);

  CommonOptions common;
  std::vector<std::string> rankers;
  std::string axis;
  std::vector<double> values;
  std::string model_path;
  std::vector<std::string> artifacts;
  std::string report_out;
  std::vector<std::string> report_formats = {"csv", "json", "markdown"};

  CLI::App* generate = app.add_subcommand("generate", "sample candidate suffixes");
  AddCommon(generate, common);
  CLI::App* rank = app.add_subcommand("rank", "rank candidates, per-ranker M_P / M_H");
  AddCommon(rank, common);
  rank->add_option("--rankers", rankers, "scores to rank by (default: enabled)");
  CLI::App* confirm = app.add_subcommand("confirm", "confirmation AUROC tables");
  AddCommon(confirm, common);
  CLI::App* sweep = app.add_subcommand("sweep", "score hyperparameter sweep");
  AddCommon(sweep, common);
  sweep->add_option("--axis", axis, "min_k_fraction, surp_low_threshold or recall_num_prefixes");
  sweep->add_option("--values", values, "values to sweep");
  CLI::App* ensemble = app.add_subcommand("ensemble", "score ensembles");
  ensemble->require_subcommand(1);
  CLI::App* ens_train = ensemble->add_subcommand("train", "train and evaluate on 80/20 splits");
  AddCommon(ens_train, common);
  CLI::App* ens_eval = ensemble->add_subcommand("eval", "evaluate a saved ensemble");
  AddCommon(ens_eval, common);
  ens_eval->add_option("--model", model_path, "ensemble JSON")->required()->check(CLI::ExistingFile);
  CLI::App* bow = app.add_subcommand("bow", "bag-of-words baseline");
  AddCommon(bow, common);
  CLI::App* lab = app.add_subcommand("lab", "canary memorization lab");
  AddCommon(lab, common);
  CLI::App* report = app.add_subcommand("report", "re-emit tables from run artifacts");
  report->add_option("artifacts", artifacts, "artifact directories")->required();
  report->add_option("-o,--out", report_out, "output directory (default: each artifact)");
  report->add_option("--formats", report_formats, "csv, json, markdown");
  CLI::App* selftest = app.add_subcommand("selftest", "run the brute-force oracle suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "vp: " << e.what() << "\n";
    return 1;
  }

  try {
    if (generate->parsed()) return CmdGenerate(common, out);
    if (rank->parsed()) return CmdRank(common, rankers, out);
    if (confirm->parsed()) return CmdConfirm(common, out);
    if (sweep->parsed()) return CmdSweep(common, axis, values, out);
    if (ens_train->parsed()) return CmdEnsembleTrain(common, out);
    if (ens_eval->parsed()) return CmdEnsembleEval(common, model_path, out);
    if (bow->parsed()) return CmdBow(common, out);
    if (lab->parsed()) return CmdLab(common, out);
    if (report->parsed()) return CmdReport(artifacts, report_out, report_formats, out);
    if (selftest->parsed()) return CmdSelftest(out);
  } catch (const Error& e) {
    err << "vp: " << ErrorKindName(e.kind()) << ": " << e.what() << "\n";
    return e.is_validation() ? 1 : 2;
  } catch (const std::exception& e) {
    err << "vp: error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace vp
