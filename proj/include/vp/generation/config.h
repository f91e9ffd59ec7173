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
#ifndef VP_GENERATION_CONFIG_H_
#define VP_GENERATION_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vp {

// Decoding settings. Unset transforms are skipped.
struct GenerationConfig {
  std::optional<int> top_k;
  std::optional<double> top_p;
  std::optional<double> typical_p;
  std::optional<double> temperature;
  std::optional<double> repetition_penalty;
  int num_candidates = 20;
  int max_new_tokens = 50;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Names accepted by ApplyPreset: nucleus, temperature, typical, topk,
// rep_penalty, composite.
const std::vector<std::string>& PresetNames();

// Overwrites the transform fields of `config` with the named preset and
// clears the others. Throws Error(kConfig) for unknown names.
void ApplyPreset(std::string_view name, GenerationConfig& config);

}  // namespace vp

#endif  // VP_GENERATION_CONFIG_H_
