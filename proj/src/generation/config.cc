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
#include "vp/generation/config.h"

#include <cmath>

#include <fmt/core.h>

#include "vp/core/error.h"

namespace vp {
namespace {

void Require(bool ok, const char* field, const std::string& bound) {
  if (!ok) {
    Fail(ErrorKind::kConfig,
         fmt::format("generation.{} is out of bounds (must be {})", field, bound));
  }
}

}  // namespace

void GenerationConfig::Validate() const {
  if (top_k) Require(*top_k >= 1, "top_k", ">= 1");
  if (top_p) Require(*top_p > 0.0 && *top_p <= 1.0, "top_p", "in (0, 1]");
  if (typical_p) {
    Require(*typical_p > 0.0 && *typical_p <= 1.0, "typical_p", "in (0, 1]");
  }
  if (temperature) {
    Require(*temperature > 0.0 && std::isfinite(*temperature), "temperature",
            "> 0");
  }
  if (repetition_penalty) {
    Require(*repetition_penalty >= 1.0 && std::isfinite(*repetition_penalty),
            "repetition_penalty", ">= 1");
  }
  Require(num_candidates >= 1, "num_candidates", ">= 1");
  Require(max_new_tokens >= 1, "max_new_tokens", ">= 1");
}

const std::vector<std::string>& PresetNames() {
  static const std::vector<std::string> names = {
      "nucleus", "temperature", "typical", "topk", "rep_penalty", "composite"};
  return names;
}

void ApplyPreset(std::string_view name, GenerationConfig& config) {
  config.top_k.reset();
  config.top_p.reset();
  config.typical_p.reset();
  config.temperature.reset();
  config.repetition_penalty.reset();
  if (name == "nucleus") {
    config.top_p = 0.6;
  } else if (name == "temperature") {
    config.temperature = 0.3;
  } else if (name == "typical") {
    config.typical_p = 0.6;
  } else if (name == "topk") {
    config.top_k = 10;
  } else if (name == "rep_penalty") {
    config.repetition_penalty = 1.1;
  } else if (name == "composite") {
    config.top_p = 0.8;
    config.top_k = 24;
    config.temperature = 0.58;
    config.repetition_penalty = 1.04;
    config.typical_p = 0.9;
  } else {
    Fail(ErrorKind::kConfig,
         fmt::format("unknown generation preset '{}'", name));
  }
}

}  // namespace vp
