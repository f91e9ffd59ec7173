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
#ifndef VP_CORE_ARTIFACT_H_
#define VP_CORE_ARTIFACT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vp/core/types.h"

namespace vp {

// Persisted outcome of one run. On disk this is a directory holding
// config.toml (the snapshot), records.jsonl and metrics.json.
struct RunArtifact {
  std::string run_id;
  std::string config_snapshot;
  std::uint64_t seed = 0;
  std::vector<ScoredCandidate> records;
  std::map<std::string, bool> labels;
  std::map<std::string, double> metrics;
};

// Throws Error(kInput) if a record references an unlabeled example.
void CheckLabelsCover(const RunArtifact& artifact);

void SaveArtifact(const RunArtifact& artifact,
                  const std::filesystem::path& dir);
RunArtifact LoadArtifact(const std::filesystem::path& dir);

}  // namespace vp

#endif  // VP_CORE_ARTIFACT_H_
