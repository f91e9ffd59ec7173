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
#ifndef VP_CORE_ERROR_H_
#define VP_CORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vp {

enum class ErrorKind {
  kParse,
  kSchema,
  kConfig,
  kInput,
  kDomain,
  kMetric,
  kTraining,
  kGeneration,
  kMissingRequirement,
  kUnsupported,
  kWire,
  kUnavailable,
  kServerFault,
  kConstruction,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures surface as vp::Error. The kind decides the CLI exit
// code: validation kinds map to 1, everything else to 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  bool is_validation() const {
    return kind_ == ErrorKind::kParse || kind_ == ErrorKind::kSchema ||
           kind_ == ErrorKind::kConfig || kind_ == ErrorKind::kInput;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace vp

#endif  // VP_CORE_ERROR_H_
