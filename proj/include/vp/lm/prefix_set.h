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
#ifndef VP_LM_PREFIX_SET_H_
#define VP_LM_PREFIX_SET_H_

#include <filesystem>
#include <string>
#include <vector>

#include "vp/lm/model.h"

namespace vp {

// Generic member / non-member conditioning prefixes for the ReCaLL family.
struct ReferencePrefixSet {
  std::vector<TokenSeq> member_prefixes;
  std::vector<TokenSeq> nonmember_prefixes;
};

// Tokenizes each text with the model and keeps the first `prefix_len`
// tokens. Empty texts are skipped.
ReferencePrefixSet MakePrefixSet(const std::vector<std::string>& member_texts,
                                 const std::vector<std::string>& nonmember_texts,
                                 const LanguageModel& model,
                                 std::size_t prefix_len);

// Text files with one prefix per line.
ReferencePrefixSet LoadPrefixSet(const std::filesystem::path& member_file,
                                 const std::filesystem::path& nonmember_file,
                                 const LanguageModel& model,
                                 std::size_t prefix_len);

}  // namespace vp

#endif  // VP_LM_PREFIX_SET_H_
