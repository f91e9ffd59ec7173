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
#include "vp/pipeline/config.h"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/core.h>
#include <toml.hpp>

#include "vp/core/error.h"

namespace vp {
namespace {

namespace fs = std::filesystem;

std::string TypeName(const toml::node& node) {
  switch (node.type()) {
    case toml::node_type::table: return "table";
    case toml::node_type::array: return "array";
    case toml::node_type::string: return "string";
    case toml::node_type::integer: return "integer";
    case toml::node_type::floating_point: return "float";
    case toml::node_type::boolean: return "boolean";
    default: return "date/time";
  }
}

// Walks one table, converting fields and remembering which keys were used
// so leftovers can be reported as unknown.
class Section {
 public:
  Section(const toml::table* table, std::string path)
      : table_(table), path_(std::move(path)) {}

  std::string Key(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const toml::node* Find(std::string_view key) {
    used_.insert(std::string(key));
    return table_ == nullptr ? nullptr : table_->get(key);
  }

  [[noreturn]] void Mismatch(std::string_view key, const toml::node& node,
                             std::string_view want) const {
    Fail(ErrorKind::kConfig, fmt::format("{}: expected {}, got {}", Key(key),
                                         want, TypeName(node)));
  }

  void Read(std::string_view key, std::string& out) {
    if (const toml::node* n = Find(key)) {
      if (!n->is_string()) Mismatch(key, *n, "string");
      out = n->as_string()->get();
    }
  }
  void Read(std::string_view key, std::optional<std::string>& out) {
    if (const toml::node* n = Find(key)) {
      if (!n->is_string()) Mismatch(key, *n, "string");
      out = n->as_string()->get();
    }
  }
  void Read(std::string_view key, int& out) {
    if (const toml::node* n = Find(key)) out = AsInt(key, *n);
  }
  void ReadSize(std::string_view key, std::size_t& out) {
    if (const toml::node* n = Find(key)) {
      const int v = AsInt(key, *n);
      if (v < 0) Fail(ErrorKind::kConfig, Key(key) + ": must be >= 0");
      out = static_cast<std::size_t>(v);
    }
  }
  void Read(std::string_view key, std::optional<int>& out) {
    if (const toml::node* n = Find(key)) out = AsInt(key, *n);
  }
  void Read(std::string_view key, double& out) {
    if (const toml::node* n = Find(key)) out = AsDouble(key, *n);
  }
  void Read(std::string_view key, std::optional<double>& out) {
    if (const toml::node* n = Find(key)) out = AsDouble(key, *n);
  }
  void Read(std::string_view key, bool& out) {
    if (const toml::node* n = Find(key)) {
      if (!n->is_boolean()) Mismatch(key, *n, "boolean");
      out = n->as_boolean()->get();
    }
  }
  void Read(std::string_view key, std::uint64_t& out) {
    if (const toml::node* n = Find(key)) out = AsSeed(key, *n);
  }
  void Read(std::string_view key, std::vector<std::string>& out) {
    if (const toml::node* n = Find(key)) {
      const toml::array* arr = n->as_array();
      if (arr == nullptr) Mismatch(key, *n, "array of strings");
      out.clear();
      for (const toml::node& item : *arr) {
        if (!item.is_string()) Mismatch(key, item, "array of strings");
        out.push_back(item.as_string()->get());
      }
    }
  }
  void Read(std::string_view key, std::vector<double>& out) {
    if (const toml::node* n = Find(key)) {
      const toml::array* arr = n->as_array();
      if (arr == nullptr) Mismatch(key, *n, "array of numbers");
      out.clear();
      for (const toml::node& item : *arr) out.push_back(AsDouble(key, item));
    }
  }
  void Read(std::string_view key, std::vector<std::uint64_t>& out) {
    if (const toml::node* n = Find(key)) {
      const toml::array* arr = n->as_array();
      if (arr == nullptr) Mismatch(key, *n, "array of integers");
      out.clear();
      for (const toml::node& item : *arr) out.push_back(AsSeed(key, item));
    }
  }

  Section Sub(std::string_view key) {
    const toml::node* n = Find(key);
    if (n != nullptr && !n->is_table()) Mismatch(key, *n, "table");
    return Section(n == nullptr ? nullptr : n->as_table(), Key(key));
  }

  void Finish() const {
    if (table_ == nullptr) return;
    for (const auto& [k, v] : *table_) {
      if (!used_.contains(std::string(k.str()))) {
        Fail(ErrorKind::kConfig, fmt::format("unknown key '{}'", Key(k.str())));
      }
    }
  }

 private:
  int AsInt(std::string_view key, const toml::node& n) const {
    if (!n.is_integer()) Mismatch(key, n, "integer");
    const std::int64_t v = n.as_integer()->get();
    if (v < INT32_MIN || v > INT32_MAX) {
      Fail(ErrorKind::kConfig, Key(key) + ": integer out of range");
    }
    return static_cast<int>(v);
  }
  double AsDouble(std::string_view key, const toml::node& n) const {
    if (n.is_floating_point()) return n.as_floating_point()->get();
    if (n.is_integer()) return static_cast<double>(n.as_integer()->get());
    Mismatch(key, n, "number");
  }
  std::uint64_t AsSeed(std::string_view key, const toml::node& n) const {
    if (!n.is_integer() || n.as_integer()->get() < 0) {
      Fail(ErrorKind::kConfig,
           fmt::format("{}: expected a nonnegative integer", Key(key)));
    }
    return static_cast<std::uint64_t>(n.as_integer()->get());
  }

  const toml::table* table_;
  std::string path_;
  std::set<std::string> used_;
};

toml::table ParseToml(std::string_view text, std::string_view source) {
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    Fail(ErrorKind::kParse,
         fmt::format("{}:{}:{}: {}", source, e.source().begin.line,
                     e.source().begin.column, e.description()));
  }
}

void ApplyOverride(toml::table& root, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    Fail(ErrorKind::kConfig,
         fmt::format("override '{}' is not of the form key=value", assignment));
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  toml::table parsed;
  try {
    parsed = toml::parse("v = " + raw);
  } catch (const toml::parse_error&) {
    parsed.insert_or_assign("v", raw);  // bare word
  }
  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) {
      Fail(ErrorKind::kConfig, fmt::format("override key '{}' is malformed", key));
    }
    parts.push_back(part);
  }
  toml::table* table = &root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    toml::node* child = table->get(parts[i]);
    if (child == nullptr) {
      table->insert_or_assign(parts[i], toml::table{});
      child = table->get(parts[i]);
    }
    if (!child->is_table()) {
      Fail(ErrorKind::kConfig,
           fmt::format("override '{}': '{}' is not a table", key, parts[i]));
    }
    table = child->as_table();
  }
  parsed.get("v")->visit(
      [&](auto&& node) { table->insert_or_assign(parts.back(), node); });
}

std::string Resolve(const std::string& path, const fs::path& base) {
  if (path.empty()) return path;
  const fs::path p(path);
  if (p.is_absolute() || base.empty()) return p.lexically_normal().string();
  return (base / p).lexically_normal().string();
}

template <typename T>
toml::array ToArray(const std::vector<T>& values) {
  toml::array arr;
  for (const T& v : values) {
    if constexpr (std::is_same_v<T, std::uint64_t>) {
      arr.push_back(static_cast<std::int64_t>(v));
    } else {
      arr.push_back(v);
    }
  }
  return arr;
}

}  // namespace

std::vector<ScoreMode> RunConfig::ConfirmationModes() const {
  if (confirmation.mode == "both") {
    return {ScoreMode::kSuffixOnly, ScoreMode::kFullSequence};
  }
  return {ParseScoreMode(confirmation.mode)};
}

void RunConfig::Validate() const {
  if (model.kind != "reference" && model.kind != "remote") {
    Fail(ErrorKind::kConfig,
         fmt::format("model.kind '{}' is not reference or remote", model.kind));
  }
  if (model.kind == "remote" && model.endpoint.empty()) {
    Fail(ErrorKind::kConfig,
         "model.endpoint is required for remote models (or set VP_MODEL_ENDPOINT)");
  }
  if (model.ngram_order < 1 || model.ngram_order > 64) {
    Fail(ErrorKind::kConfig, "model.ngram.order is out of bounds (must be in [1, 64])");
  }
  if (model.max_inflight < 1 || model.max_inflight > 1024) {
    Fail(ErrorKind::kConfig, "model.max_inflight is out of bounds (must be in [1, 1024])");
  }
  generation.sampling.Validate();
  if (generation.max_new_tokens < 0) {
    Fail(ErrorKind::kConfig, "generation.max_new_tokens must be >= 0");
  }
  if (generation.trials < 1) {
    Fail(ErrorKind::kConfig, "generation.trials is out of bounds (must be >= 1)");
  }
  if (enabled_scores.empty()) {
    Fail(ErrorKind::kConfig, "scores.enabled must list at least one score");
  }
  for (const std::string& name : enabled_scores) FindScore(name);
  scores.Validate();
  ConfirmationModes();
  for (const std::string& f : report.formats) {
    if (f != "csv" && f != "json" && f != "markdown") {
      Fail(ErrorKind::kConfig,
           fmt::format("report.formats: '{}' is not csv, json or markdown", f));
    }
  }
  if (sweep.axis != "min_k_fraction" && sweep.axis != "surp_low_threshold" &&
      sweep.axis != "recall_num_prefixes") {
    Fail(ErrorKind::kConfig, fmt::format("sweep.axis '{}' is not sweepable", sweep.axis));
  }
  if (sweep.values.empty()) Fail(ErrorKind::kConfig, "sweep.values is empty");
  if (ensemble.kind != "adaboost_r2" && ensemble.kind != "random_forest") {
    Fail(ErrorKind::kConfig,
         fmt::format("ensemble.kind '{}' is not adaboost_r2 or random_forest",
                     ensemble.kind));
  }
  if (ensemble.rounds < 1 || ensemble.trees < 1 || ensemble.max_depth < 1 ||
      ensemble.min_leaf < 1 || ensemble.repeats < 1) {
    Fail(ErrorKind::kConfig,
         "ensemble.rounds, trees, max_depth, min_leaf and repeats must be >= 1");
  }
  if (!(ensemble.learning_rate > 0.0)) {
    Fail(ErrorKind::kConfig, "ensemble.learning_rate must be > 0");
  }
  if (!(ensemble.test_fraction > 0.0 && ensemble.test_fraction < 1.0)) {
    Fail(ErrorKind::kConfig, "ensemble.test_fraction must be in (0, 1)");
  }
  if (!(ensemble.bow_min_doc_fraction > 0.0 && ensemble.bow_min_doc_fraction <= 1.0)) {
    Fail(ErrorKind::kConfig, "ensemble.bow_min_doc_fraction must be in (0, 1]");
  }
  if (lab.name_pool < 1 || lab.name_pool > 144) {
    Fail(ErrorKind::kConfig, "lab.name_pool is out of bounds (must be in [1, 144])");
  }
  if (lab.contact_names < 1 || lab.contact_names > 1728) {
    Fail(ErrorKind::kConfig,
         "lab.contact_names is out of bounds (must be in [1, 1728])");
  }
  if (!(lab.phone_lines_per_doc >= 0.0 && lab.phone_lines_per_doc <= 16.0)) {
    Fail(ErrorKind::kConfig,
         "lab.phone_lines_per_doc is out of bounds (must be in [0, 16])");
  }
  if (lab.background < 0 || lab.secret_len < 1 || lab.controls < 0 ||
      lab.ngram_order < 2 || lab.ngram_order > 64 || lab.seeds.empty()) {
    Fail(ErrorKind::kConfig, "lab: background, secret_len, controls, ngram.order or seeds out of bounds");
  }
  for (const auto& [rep, count] : lab.layout) {
    if (rep < 1 || count < 0) {
      Fail(ErrorKind::kConfig, "lab.layout: repetitions must be >= 1 and counts >= 0");
    }
  }
  if (workers < 0) Fail(ErrorKind::kConfig, "workers must be >= 0");
}

RunConfig ParseRunConfig(std::string_view toml_text, std::string_view source,
                         const std::vector<std::string>& overrides,
                         const fs::path& base_dir) {
  toml::table root = ParseToml(toml_text, source);
  for (const std::string& o : overrides) ApplyOverride(root, o);

  RunConfig c;
  Section top(&root, "");
  top.Read("workers", c.workers);
  {
    Section s = top.Sub("model");
    s.Read("kind", c.model.kind);
    s.Read("path", c.model.path);
    s.Read("corpus", c.model.corpus);
    s.Read("endpoint", c.model.endpoint);
    s.Read("timeout_ms", c.model.timeout_ms);
    s.Read("max_inflight", c.model.max_inflight);
    s.ReadSize("cache_capacity", c.model.cache_capacity);
    Section ng = s.Sub("ngram");
    ng.Read("order", c.model.ngram_order);
    ng.Read("lambda", c.model.ngram_lambda);
    ng.Finish();
    s.Finish();
  }
  {
    Section s = top.Sub("data");
    s.Read("examples", c.data.examples);
    s.Read("member_prefixes", c.data.member_prefixes);
    s.Read("nonmember_prefixes", c.data.nonmember_prefixes);
    s.Finish();
  }
  {
    Section s = top.Sub("generation");
    GenerationConfig& g = c.generation.sampling;
    s.Read("preset", c.generation.preset);
    if (c.generation.preset) ApplyPreset(*c.generation.preset, g);
    s.Read("top_k", g.top_k);
    s.Read("top_p", g.top_p);
    s.Read("typical_p", g.typical_p);
    s.Read("temperature", g.temperature);
    s.Read("repetition_penalty", g.repetition_penalty);
    s.Read("num_candidates", g.num_candidates);
    s.Read("max_new_tokens", c.generation.max_new_tokens);
    s.Read("trials", c.generation.trials);
    s.Read("seed", g.seed);
    s.Finish();
  }
  {
    Section s = top.Sub("scores");
    ScoreConfig& sc = c.scores;
    s.Read("enabled", c.enabled_scores);
    s.Read("min_k_fraction", sc.min_k_fraction);
    s.Read("surp_low_threshold", sc.surp_low_threshold);
    s.Read("surp_entropy_max", sc.surp_entropy_max);
    s.Read("hc_tau", sc.hc_tau);
    s.Read("hc_alpha", sc.hc_alpha);
    s.Read("recall_num_prefixes", sc.recall_num_prefixes);
    s.Read("recall_prefix_len", sc.recall_prefix_len);
    s.Read("conrecall_gamma", sc.conrecall_gamma);
    s.Read("outlier_sigma_mult", sc.outlier_sigma_mult);
    s.Finish();
  }
  {
    Section s = top.Sub("confirmation");
    s.Read("mode", c.confirmation.mode);
    s.Finish();
  }
  {
    Section s = top.Sub("report");
    s.Read("formats", c.report.formats);
    s.Read("out_dir", c.report.out_dir);
    s.Finish();
  }
  {
    Section s = top.Sub("sweep");
    s.Read("axis", c.sweep.axis);
    s.Read("values", c.sweep.values);
    s.Finish();
  }
  {
    Section s = top.Sub("ensemble");
    EnsembleConfig& e = c.ensemble;
    s.Read("kind", e.kind);
    s.Read("rounds", e.rounds);
    s.Read("learning_rate", e.learning_rate);
    s.Read("bootstrap", e.bootstrap);
    s.Read("trees", e.trees);
    s.Read("max_depth", e.max_depth);
    s.Read("min_leaf", e.min_leaf);
    s.Read("repeats", e.repeats);
    s.Read("test_fraction", e.test_fraction);
    s.Read("bow_min_doc_fraction", e.bow_min_doc_fraction);
    s.Finish();
  }
  {
    Section s = top.Sub("lab");
    LabConfig& l = c.lab;
    s.Read("secret_len", l.secret_len);
    s.Read("seeds", l.seeds);
    s.Read("controls", l.controls);
    s.Read("name_pool", l.name_pool);
    s.Read("contact_names", l.contact_names);
    s.Read("phone_lines_per_doc", l.phone_lines_per_doc);
    Section ng = s.Sub("ngram");
    ng.Read("order", l.ngram_order);
    ng.Finish();
    Section layout = s.Sub("layout");
    layout.Read("background", l.background);
    for (int rep = 1; rep <= 16; ++rep) {
      int count = -1;
      layout.Read(fmt::format("x{}", rep), count);
      if (count >= 0) {
        l.layout[rep] = count;
      }
    }
    layout.Finish();
    s.Finish();
  }
  top.Finish();

  c.model.path = Resolve(c.model.path, base_dir);
  c.model.corpus = Resolve(c.model.corpus, base_dir);
  c.data.examples = Resolve(c.data.examples, base_dir);
  c.data.member_prefixes = Resolve(c.data.member_prefixes, base_dir);
  c.data.nonmember_prefixes = Resolve(c.data.nonmember_prefixes, base_dir);
  c.report.out_dir = Resolve(c.report.out_dir, base_dir);
  c.Validate();
  return c;
}

RunConfig LoadRunConfig(const fs::path& path,
                        const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const fs::path base = fs::absolute(path).parent_path();
  return ParseRunConfig(ss.str(), path.string(), overrides, base);
}

std::string SnapshotToml(const RunConfig& c) {
  toml::table root;
  root.insert("workers", c.workers);

  toml::table model{{"kind", c.model.kind},
                    {"timeout_ms", c.model.timeout_ms},
                    {"max_inflight", c.model.max_inflight},
                    {"cache_capacity", static_cast<std::int64_t>(c.model.cache_capacity)}};
  if (!c.model.path.empty()) model.insert("path", c.model.path);
  if (!c.model.corpus.empty()) model.insert("corpus", c.model.corpus);
  if (!c.model.endpoint.empty()) model.insert("endpoint", c.model.endpoint);
  toml::table ngram{{"order", c.model.ngram_order}};
  if (!c.model.ngram_lambda.empty()) {
    ngram.insert("lambda", ToArray(c.model.ngram_lambda));
  }
  model.insert("ngram", ngram);
  root.insert("model", model);

  toml::table data;
  if (!c.data.examples.empty()) data.insert("examples", c.data.examples);
  if (!c.data.member_prefixes.empty()) {
    data.insert("member_prefixes", c.data.member_prefixes);
  }
  if (!c.data.nonmember_prefixes.empty()) {
    data.insert("nonmember_prefixes", c.data.nonmember_prefixes);
  }
  root.insert("data", data);

  const GenerationConfig& g = c.generation.sampling;
  toml::table gen{{"num_candidates", g.num_candidates},
                  {"max_new_tokens", c.generation.max_new_tokens},
                  {"trials", c.generation.trials},
                  {"seed", static_cast<std::int64_t>(g.seed)}};
  if (c.generation.preset) gen.insert("preset", *c.generation.preset);
  if (g.top_k) gen.insert("top_k", *g.top_k);
  if (g.top_p) gen.insert("top_p", *g.top_p);
  if (g.typical_p) gen.insert("typical_p", *g.typical_p);
  if (g.temperature) gen.insert("temperature", *g.temperature);
  if (g.repetition_penalty) gen.insert("repetition_penalty", *g.repetition_penalty);
  root.insert("generation", gen);

  const ScoreConfig& s = c.scores;
  root.insert("scores",
              toml::table{{"enabled", ToArray(c.enabled_scores)},
                          {"min_k_fraction", s.min_k_fraction},
                          {"surp_low_threshold", s.surp_low_threshold},
                          {"surp_entropy_max", s.surp_entropy_max},
                          {"hc_tau", s.hc_tau},
                          {"hc_alpha", s.hc_alpha},
                          {"recall_num_prefixes", s.recall_num_prefixes},
                          {"recall_prefix_len", s.recall_prefix_len},
                          {"conrecall_gamma", s.conrecall_gamma},
                          {"outlier_sigma_mult", s.outlier_sigma_mult}});
  root.insert("confirmation", toml::table{{"mode", c.confirmation.mode}});
  root.insert("report", toml::table{{"formats", ToArray(c.report.formats)},
                                    {"out_dir", c.report.out_dir}});
  root.insert("sweep", toml::table{{"axis", c.sweep.axis},
                                   {"values", ToArray(c.sweep.values)}});
  const EnsembleConfig& e = c.ensemble;
  root.insert("ensemble", toml::table{{"kind", e.kind},
                                      {"rounds", e.rounds},
                                      {"learning_rate", e.learning_rate},
                                      {"bootstrap", e.bootstrap},
                                      {"trees", e.trees},
                                      {"max_depth", e.max_depth},
                                      {"min_leaf", e.min_leaf},
                                      {"repeats", e.repeats},
                                      {"test_fraction", e.test_fraction},
                                      {"bow_min_doc_fraction", e.bow_min_doc_fraction}});
  toml::table layout{{"background", c.lab.background}};
  for (const auto& [rep, count] : c.lab.layout) {
    layout.insert(fmt::format("x{}", rep), count);
  }
  root.insert("lab", toml::table{{"secret_len", c.lab.secret_len},
                                 {"seeds", ToArray(c.lab.seeds)},
                                 {"controls", c.lab.controls},
                                 {"name_pool", c.lab.name_pool},
                                 {"contact_names", c.lab.contact_names},
                                 {"phone_lines_per_doc", c.lab.phone_lines_per_doc},
                                 {"ngram", toml::table{{"order", c.lab.ngram_order}}},
                                 {"layout", layout}});
  std::ostringstream out;
  out << root << "\n";
  return out.str();
}

void ApplyEnvironment(RunConfig& config) {
  if (const char* endpoint = std::getenv("VP_MODEL_ENDPOINT");
      endpoint != nullptr && *endpoint != '\0') {
    config.model.endpoint = endpoint;
  }
  if (const char* token = std::getenv("VP_MODEL_TOKEN");
      token != nullptr && *token != '\0') {
    config.model.auth_token = token;
  }
}

}  // namespace vp
