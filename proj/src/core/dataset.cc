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
#include "vp/core/dataset.h"

#include <fstream>
#include <set>

#include <fmt/core.h>
#include <json.hpp>

#include "vp/core/error.h"
#include "vp/lm/model.h"

namespace vp {
namespace {

using nlohmann::json;

std::string Where(const std::string& source, std::size_t line) {
  return fmt::format("{}:{}", source, line);
}

// Returns nullopt when the key is absent or null.
std::optional<TokenSeq> OptionalTokens(const json& obj, const char* key,
                                       const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) {
    Fail(ErrorKind::kSchema,
         fmt::format("{}: '{}' must be an array of tokens", where, key));
  }
  TokenSeq tokens;
  for (const json& v : *it) {
    if (!v.is_number_unsigned()) {
      Fail(ErrorKind::kSchema,
           fmt::format("{}: '{}' holds a non-token value", where, key));
    }
    tokens.push_back(v.get<Token>());
  }
  if (tokens.empty()) {
    Fail(ErrorKind::kSchema,
         fmt::format("{}: '{}' must be nonempty", where, key));
  }
  return tokens;
}

std::optional<std::string> OptionalText(const json& obj, const char* key,
                                        const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    Fail(ErrorKind::kSchema,
         fmt::format("{}: '{}' must be a string", where, key));
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<ExtractionExample> ParseExamples(std::istream& in,
                                             const std::string& source_name) {
  std::vector<ExtractionExample> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = Where(source_name, line_no);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      Fail(ErrorKind::kParse, fmt::format("{}: {}", where, e.what()));
    }
    if (!obj.is_object()) {
      Fail(ErrorKind::kParse, fmt::format("{}: line is not a JSON object", where));
    }
    auto id_it = obj.find("id");
    if (id_it == obj.end() || !id_it->is_string()) {
      Fail(ErrorKind::kSchema, fmt::format("{}: missing string 'id'", where));
    }
    ExtractionExample ex;
    ex.id = id_it->get<std::string>();
    if (!seen.insert(ex.id).second) {
      Fail(ErrorKind::kSchema,
           fmt::format("{}: duplicate id '{}'", where, ex.id));
    }
    auto prefix_tokens = OptionalTokens(obj, "prefix_tokens", where);
    auto suffix_tokens = OptionalTokens(obj, "suffix_tokens", where);
    ex.prefix_text = OptionalText(obj, "prefix_text", where);
    ex.suffix_text = OptionalText(obj, "suffix_text", where);
    const bool has_tokens = prefix_tokens && suffix_tokens;
    const bool has_text = ex.prefix_text && ex.suffix_text;
    if (!has_tokens && !has_text) {
      Fail(ErrorKind::kSchema,
           fmt::format("{}: example '{}' needs prefix/suffix tokens or text",
                       where, ex.id));
    }
    if (prefix_tokens) ex.prefix_tokens = std::move(*prefix_tokens);
    if (suffix_tokens) ex.suffix_tokens = std::move(*suffix_tokens);
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<ExtractionExample> LoadExamples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open dataset " + path.string());
  return ParseExamples(in, path.string());
}

void SaveExamples(const std::filesystem::path& path,
                  const std::vector<ExtractionExample>& examples) {
  std::ofstream out(path);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  for (const ExtractionExample& ex : examples) {
    json obj{{"id", ex.id}};
    if (!ex.prefix_tokens.empty()) obj["prefix_tokens"] = ex.prefix_tokens;
    if (!ex.suffix_tokens.empty()) obj["suffix_tokens"] = ex.suffix_tokens;
    if (ex.prefix_text) obj["prefix_text"] = *ex.prefix_text;
    if (ex.suffix_text) obj["suffix_text"] = *ex.suffix_text;
    out << obj.dump() << '\n';
  }
}

void ResolveTokens(std::vector<ExtractionExample>& examples,
                   const LanguageModel& model) {
  const std::size_t vocab = model.Info().vocab_size;
  auto resolve = [&](const ExtractionExample& ex, TokenSeq& tokens,
                     std::optional<std::string>& text, const char* which) {
    if (tokens.empty()) {
      tokens = model.Tokenize(*text);
      if (tokens.empty()) {
        Fail(ErrorKind::kSchema,
             fmt::format("example '{}': {} text tokenizes to nothing", ex.id,
                         which));
      }
    } else if (text) {
      if (model.Tokenize(*text) != tokens) {
        Fail(ErrorKind::kSchema,
             fmt::format("example '{}': {} text does not round-trip to its "
                         "tokens",
                         ex.id, which));
      }
    } else {
      text = model.Detokenize(tokens);
    }
    for (Token t : tokens) {
      if (t >= vocab) {
        Fail(ErrorKind::kSchema,
             fmt::format("example '{}': {} token {} outside vocabulary of {}",
                         ex.id, which, t, vocab));
      }
    }
  };
  for (ExtractionExample& ex : examples) {
    resolve(ex, ex.prefix_tokens, ex.prefix_text, "prefix");
    resolve(ex, ex.suffix_tokens, ex.suffix_text, "suffix");
  }
}

std::vector<std::string> LoadTextCorpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open corpus " + path.string());
  std::vector<std::string> texts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json v;
    try {
      v = json::parse(line);
    } catch (const json::parse_error& e) {
      Fail(ErrorKind::kParse,
           fmt::format("{}: {}", Where(path.string(), line_no), e.what()));
    }
    if (v.is_string()) {
      texts.push_back(v.get<std::string>());
    } else if (v.is_object() && v.contains("text") && v["text"].is_string()) {
      texts.push_back(v["text"].get<std::string>());
    } else {
      Fail(ErrorKind::kSchema,
           fmt::format("{}: expected a string or an object with 'text'",
                       Where(path.string(), line_no)));
    }
  }
  return texts;
}

}  // namespace vp
