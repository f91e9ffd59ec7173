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
#ifndef VP_LM_TRACE_CACHE_H_
#define VP_LM_TRACE_CACHE_H_

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "vp/lm/model.h"

namespace vp {

// LRU cache of trace lists keyed by (model name, context hash, continuation
// hash). Entries keep the full token sequences, so a hash collision is a
// miss rather than a wrong answer.
class TraceCache {
 public:
  explicit TraceCache(std::size_t capacity_entries);

  std::optional<TraceSeq> Get(std::string_view model, TokenSpan context,
                              TokenSpan continuation);
  void Put(std::string_view model, TokenSpan context, TokenSpan continuation,
           TraceSeq traces);

  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }
  std::uint64_t hits() const;
  std::uint64_t misses() const;

 private:
  struct Entry {
    std::string model;
    TokenSeq context;
    TokenSeq continuation;
    TraceSeq traces;
  };
  using List = std::list<Entry>;

  static std::uint64_t HashKey(std::string_view model, TokenSpan context,
                               TokenSpan continuation);

  std::size_t capacity_;
  mutable std::mutex mu_;
  List lru_;  // front is most recent
  std::unordered_multimap<std::uint64_t, List::iterator> index_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

std::uint64_t HashTokens(TokenSpan tokens);

// Decorator that serves Trace from a TraceCache and counts the calls that
// reach the wrapped model.
class CachedModel final : public LanguageModel {
 public:
  CachedModel(std::shared_ptr<const LanguageModel> inner,
              std::size_t capacity_entries);

  const LmInfo& Info() const override { return inner_->Info(); }
  std::vector<double> NextDistribution(TokenSpan context) const override;
  TraceSeq Trace(TokenSpan context, TokenSpan continuation) const override;
  TokenSeq Tokenize(std::string_view text) const override {
    return inner_->Tokenize(text);
  }
  std::string Detokenize(TokenSpan tokens) const override {
    return inner_->Detokenize(tokens);
  }
  TextTrace TraceText(std::string_view context_text,
                      std::string_view continuation_text,
                      bool lowercase) const override;
  std::optional<std::vector<GeneratedSequence>> GenerateNative(
      TokenSpan prefix, const GenerationConfig& config) const override {
    return inner_->GenerateNative(prefix, config);
  }

  // Calls forwarded to the wrapped model (Trace misses, NextDistribution,
  // TraceText).
  std::uint64_t inner_calls() const { return inner_calls_.load(); }
  TraceCache& cache() const { return cache_; }
  const LanguageModel& inner() const { return *inner_; }

 private:
  std::shared_ptr<const LanguageModel> inner_;
  mutable TraceCache cache_;
  mutable std::atomic<std::uint64_t> inner_calls_{0};
};

}  // namespace vp

#endif  // VP_LM_TRACE_CACHE_H_
