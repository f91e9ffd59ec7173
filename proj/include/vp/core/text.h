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
#ifndef VP_CORE_TEXT_H_
#define VP_CORE_TEXT_H_

#include <string>
#include <string_view>

namespace vp {

// Unicode simple lowercase mapping, code point by code point. Invalid UTF-8
// bytes are passed through untouched.
std::string ToLowerUtf8(std::string_view text);

}  // namespace vp

#endif  // VP_CORE_TEXT_H_
