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
#include "vp/core/artifact.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vp/core/error.h"
#include "vp/core/json_io.h"

namespace vp {
namespace {

using nlohmann::json;

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  return out;
}

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void CheckLabelsCover(const RunArtifact& artifact) {
  for (const ScoredCandidate& c : artifact.records) {
    if (!artifact.labels.contains(c.example_id)) {
      Fail(ErrorKind::kInput,
           "record for example '" + c.example_id + "' has no label");
    }
  }
}

void SaveArtifact(const RunArtifact& artifact,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  OpenForWrite(dir / "config.toml") << artifact.config_snapshot;
  {
    auto out = OpenForWrite(dir / "records.jsonl");
    for (const ScoredCandidate& c : artifact.records) {
      out << CandidateToJson(c).dump() << '\n';
    }
  }
  json labels = json::object();
  for (const auto& [id, label] : artifact.labels) labels[id] = label;
  json metrics = json::object();
  for (const auto& [name, value] : artifact.metrics) metrics[name] = value;
  json meta{{"run_id", artifact.run_id},
            {"seed", artifact.seed},
            {"labels", std::move(labels)},
            {"metrics", std::move(metrics)}};
  OpenForWrite(dir / "metrics.json") << meta.dump(2) << '\n';
}

RunArtifact LoadArtifact(const std::filesystem::path& dir) {
  RunArtifact a;
  a.config_snapshot = ReadAll(dir / "config.toml");
  {
    std::istringstream records(ReadAll(dir / "records.jsonl"));
    std::string line;
    while (std::getline(records, line)) {
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        Fail(ErrorKind::kParse, (dir / "records.jsonl").string() + ": " + e.what());
      }
      a.records.push_back(CandidateFromJson(j));
    }
  }
  try {
    json meta = json::parse(ReadAll(dir / "metrics.json"));
    a.run_id = meta.at("run_id").get<std::string>();
    a.seed = meta.at("seed").get<std::uint64_t>();
    for (const auto& [id, v] : meta.at("labels").items()) {
      a.labels[id] = v.get<bool>();
    }
    for (const auto& [name, v] : meta.at("metrics").items()) {
      a.metrics[name] = v.get<double>();
    }
  } catch (const json::exception& e) {
    Fail(ErrorKind::kParse, (dir / "metrics.json").string() + ": " + e.what());
  }
  return a;
}

}  // namespace vp
