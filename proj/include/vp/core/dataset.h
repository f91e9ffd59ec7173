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
#ifndef VP_CORE_DATASET_H_
#define VP_CORE_DATASET_H_

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "vp/core/types.h"

namespace vp {

class LanguageModel;

// Reads a JSONL benchmark file. Each line holds `id` and token and/or text
// fields for prefix and suffix. Token fields that are present must be
// nonempty; text-only records keep empty token fields until
// ResolveTokens runs. Ids must be unique.
std::vector<ExtractionExample> LoadExamples(const std::filesystem::path& path);
std::vector<ExtractionExample> ParseExamples(std::istream& in,
                                             const std::string& source_name);

void SaveExamples(const std::filesystem::path& path,
                  const std::vector<ExtractionExample>& examples);

// Fills missing token fields from text (and missing text from tokens) with
// the model's tokenizer; checks that records carrying both round-trip.
void ResolveTokens(std::vector<ExtractionExample>& examples,
                   const LanguageModel& model);

// Plain text corpus: one JSON object per line with a `text` field, or one
// JSON string per line.
std::vector<std::string> LoadTextCorpus(const std::filesystem::path& path);

}  // namespace vp

#endif  // VP_CORE_DATASET_H_
