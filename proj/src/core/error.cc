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
#include "vp/core/error.h"

namespace vp {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kSchema: return "schema error";
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kInput: return "input error";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kMetric: return "metric error";
    case ErrorKind::kTraining: return "training error";
    case ErrorKind::kGeneration: return "generation error";
    case ErrorKind::kMissingRequirement: return "missing requirement";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kWire: return "wire error";
    case ErrorKind::kUnavailable: return "unavailable";
    case ErrorKind::kServerFault: return "server fault";
    case ErrorKind::kConstruction: return "construction error";
    case ErrorKind::kIo: return "io error";
  }
  return "error";
}

}  // namespace vp
