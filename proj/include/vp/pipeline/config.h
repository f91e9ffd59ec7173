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
#ifndef VP_PIPELINE_CONFIG_H_
#define VP_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vp/core/score_config.h"
#include "vp/generation/config.h"
#include "vp/scores/registry.h"

namespace vp {

struct ModelConfig {
  std::string kind = "reference";  // reference | remote
  // reference: either a saved model file or a text corpus to train on
  std::string path;
  std::string corpus;
  int ngram_order = 8;
  std::vector<double> ngram_lambda;  // empty selects geometric weights
  // remote
  std::string endpoint;
  std::optional<std::string> auth_token;  // never written to snapshots
  int timeout_ms = 30000;
  int max_inflight = 4;
  std::size_t cache_capacity = 1 << 16;
};

struct DataConfig {
  std::string examples;
  std::string member_prefixes;
  std::string nonmember_prefixes;
};

struct RunGeneration {
  std::optional<std::string> preset;
  GenerationConfig sampling;
  // 0 generates as many tokens as each example's true suffix
  int max_new_tokens = 0;
  int trials = 1;
};

struct ConfirmationConfig {
  // suffix_only, full_sequence or both
  std::string mode = "both";
};

struct ReportConfig {
  std::vector<std::string> formats = {"csv", "json", "markdown"};
  std::string out_dir = "runs";
};

struct SweepConfig {
  std::string axis = "min_k_fraction";
  std::vector<double> values = {0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0};
};

struct EnsembleConfig {
  std::string kind = "adaboost_r2";  // adaboost_r2 | random_forest
  int rounds = 100;
  double learning_rate = 1.0;
  bool bootstrap = false;
  int trees = 500;
  int max_depth = 2;
  int min_leaf = 10;
  int repeats = 5;
  double test_fraction = 0.2;
  double bow_min_doc_fraction = 0.05;
};

struct LabConfig {
  int background = 1450;
  std::map<int, int> layout = {{1, 100}, {2, 25}, {3, 25}, {4, 25}, {5, 25}};
  int secret_len = 10;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int ngram_order = 12;
  int controls = 200;
  // Desk mail generator knobs (see DeskMailStyle).
  int name_pool = 48;
  int contact_names = 200;
  double phone_lines_per_doc = 0.4;
};

struct RunConfig {
  ModelConfig model;
  DataConfig data;
  RunGeneration generation;
  std::vector<std::string> enabled_scores = AllScoreNames();
  ScoreConfig scores;
  ConfirmationConfig confirmation;
  ReportConfig report;
  SweepConfig sweep;
  EnsembleConfig ensemble;
  LabConfig lab;
  int workers = 0;  // 0 uses the available parallelism

  std::uint64_t seed() const { return generation.sampling.seed; }
  std::vector<ScoreMode> ConfirmationModes() const;
  void Validate() const;
};

// Parses TOML text, applies `key=value` overrides (dotted keys, TOML
// values; a bare word is read as a string) and converts to a RunConfig.
// Relative paths resolve against `base_dir`. Unknown keys and type
// mismatches throw Error(kConfig) naming the key.
RunConfig ParseRunConfig(std::string_view toml_text, std::string_view source,
                         const std::vector<std::string>& overrides = {},
                         const std::filesystem::path& base_dir = {});

RunConfig LoadRunConfig(const std::filesystem::path& path,
                        const std::vector<std::string>& overrides = {});

// Canonical TOML for the resolved configuration (paths absolute, no
// secrets). Parsing it back yields an equal configuration.
std::string SnapshotToml(const RunConfig& config);

// VP_MODEL_ENDPOINT and VP_MODEL_TOKEN take precedence over [model].
void ApplyEnvironment(RunConfig& config);

}  // namespace vp

#endif  // VP_PIPELINE_CONFIG_H_
