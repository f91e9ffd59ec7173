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
#ifndef VP_CORE_JSON_IO_H_
#define VP_CORE_JSON_IO_H_

#include <json.hpp>

#include "vp/core/types.h"

namespace vp {

nlohmann::json TraceToJson(const TokenTrace& trace);
// Throws Error(kWire) when fields are missing or mistyped.
TokenTrace TraceFromJson(const nlohmann::json& j);

nlohmann::json CandidateToJson(const ScoredCandidate& candidate);
ScoredCandidate CandidateFromJson(const nlohmann::json& j);

TokenSeq TokensFromJson(const nlohmann::json& j, const char* field);

}  // namespace vp

#endif  // VP_CORE_JSON_IO_H_
