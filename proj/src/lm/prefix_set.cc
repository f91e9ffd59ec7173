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
#include "vp/lm/prefix_set.h"

#include <fstream>

#include "vp/core/error.h"

namespace vp {
namespace {

std::vector<TokenSeq> TokenizeAll(const std::vector<std::string>& texts,
                                  const LanguageModel& model,
                                  std::size_t prefix_len) {
  std::vector<TokenSeq> out;
  for (const std::string& text : texts) {
    if (text.empty()) continue;
    TokenSeq tokens = model.Tokenize(text);
    if (tokens.size() > prefix_len) tokens.resize(prefix_len);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open prefix file " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

ReferencePrefixSet MakePrefixSet(const std::vector<std::string>& member_texts,
                                 const std::vector<std::string>& nonmember_texts,
                                 const LanguageModel& model,
                                 std::size_t prefix_len) {
  return {TokenizeAll(member_texts, model, prefix_len),
          TokenizeAll(nonmember_texts, model, prefix_len)};
}

ReferencePrefixSet LoadPrefixSet(const std::filesystem::path& member_file,
                                 const std::filesystem::path& nonmember_file,
                                 const LanguageModel& model,
                                 std::size_t prefix_len) {
  return MakePrefixSet(ReadLines(member_file), ReadLines(nonmember_file), model,
                       prefix_len);
}

}  // namespace vp
