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
#ifndef VP_TESTING_INFLATE_H_
#define VP_TESTING_INFLATE_H_

#include <string>
#include <string_view>

namespace vp::testing {

// Decodes a zlib-wrapped DEFLATE stream (RFC 1950/1951). Written from the
// RFC without zlib, so tests can check the library's output independently.
// Throws std::runtime_error on malformed input or a bad Adler-32 trailer.
std::string InflateZlib(std::string_view stream);

// Adler-32 of `data`, computed directly from its definition.
unsigned Adler32(std::string_view data);

}  // namespace vp::testing

#endif  // VP_TESTING_INFLATE_H_
