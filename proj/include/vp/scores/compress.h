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
#ifndef VP_SCORES_COMPRESS_H_
#define VP_SCORES_COMPRESS_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace vp {

// zlib-wrapped DEFLATE stream (RFC 1950) of `text`.
std::string ZlibCompress(std::string_view text, int level = 6);

// Byte length of ZlibCompress(text, level). At least 8 for any input
// (2-byte header, empty final block, Adler-32 trailer).
std::size_t ZlibCompressedLength(std::string_view text, int level = 6);

}  // namespace vp

#endif  // VP_SCORES_COMPRESS_H_
