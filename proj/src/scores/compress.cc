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
#include "vp/scores/compress.h"

#include <zlib.h>

#include "vp/core/error.h"

namespace vp {

std::string ZlibCompress(std::string_view text, int level) {
  uLongf size = compressBound(static_cast<uLong>(text.size()));
  std::string out(size, '\0');
  const int rc = compress2(reinterpret_cast<Bytef*>(out.data()), &size,
                           reinterpret_cast<const Bytef*>(text.data()),
                           static_cast<uLong>(text.size()), level);
  if (rc != Z_OK) Fail(ErrorKind::kDomain, "zlib compression failed");
  out.resize(size);
  return out;
}

std::size_t ZlibCompressedLength(std::string_view text, int level) {
  return ZlibCompress(text, level).size();
}

}  // namespace vp
