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
#include "vp/lm/trace_cache.h"

#include <algorithm>

#include "vp/core/error.h"
#include "vp/core/rng.h"
#include "vp/core/text.h"

namespace vp {

std::uint64_t HashTokens(TokenSpan tokens) {
  return HashBytes(std::string_view(reinterpret_cast<const char*>(tokens.data()),
                                    tokens.size() * sizeof(Token)));
}

TraceCache::TraceCache(std::size_t capacity_entries)
    : capacity_(capacity_entries) {
  if (capacity_ == 0) Fail(ErrorKind::kConfig, "trace cache capacity must be >= 1");
}

std::uint64_t TraceCache::HashKey(std::string_view model, TokenSpan context,
                                  TokenSpan continuation) {
  std::uint64_t h = HashBytes(model);
  h = h * 0x9e3779b97f4a7c15ULL ^ HashTokens(context);
  h = h * 0x9e3779b97f4a7c15ULL ^ HashTokens(continuation);
  return h;
}

std::optional<TraceSeq> TraceCache::Get(std::string_view model,
                                        TokenSpan context,
                                        TokenSpan continuation) {
  const std::uint64_t key = HashKey(model, context, continuation);
  std::lock_guard lock(mu_);
  auto [first, last] = index_.equal_range(key);
  for (auto it = first; it != last; ++it) {
    const Entry& e = *it->second;
    if (e.model == model && std::ranges::equal(e.context, context) &&
        std::ranges::equal(e.continuation, continuation)) {
      lru_.splice(lru_.begin(), lru_, it->second);
      ++hits_;
      return e.traces;
    }
  }
  ++misses_;
  return std::nullopt;
}

void TraceCache::Put(std::string_view model, TokenSpan context,
                     TokenSpan continuation, TraceSeq traces) {
  const std::uint64_t key = HashKey(model, context, continuation);
  std::lock_guard lock(mu_);
  auto [first, last] = index_.equal_range(key);
  for (auto it = first; it != last; ++it) {
    Entry& e = *it->second;
    if (e.model == model && std::ranges::equal(e.context, context) &&
        std::ranges::equal(e.continuation, continuation)) {
      e.traces = std::move(traces);
      lru_.splice(lru_.begin(), lru_, it->second);
      return;
    }
  }
  lru_.push_front(Entry{std::string(model),
                        TokenSeq(context.begin(), context.end()),
                        TokenSeq(continuation.begin(), continuation.end()),
                        std::move(traces)});
  index_.emplace(key, lru_.begin());
  while (lru_.size() > capacity_) {
    auto victim = std::prev(lru_.end());
    const std::uint64_t victim_key =
        HashKey(victim->model, victim->context, victim->continuation);
    auto [vf, vl] = index_.equal_range(victim_key);
    for (auto it = vf; it != vl; ++it) {
      if (it->second == victim) {
        index_.erase(it);
        break;
      }
    }
    lru_.pop_back();
  }
}

std::size_t TraceCache::size() const {
  std::lock_guard lock(mu_);
  return lru_.size();
}

std::uint64_t TraceCache::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

std::uint64_t TraceCache::misses() const {
  std::lock_guard lock(mu_);
  return misses_;
}

CachedModel::CachedModel(std::shared_ptr<const LanguageModel> inner,
                         std::size_t capacity_entries)
    : inner_(std::move(inner)), cache_(capacity_entries) {}

std::vector<double> CachedModel::NextDistribution(TokenSpan context) const {
  ++inner_calls_;
  return inner_->NextDistribution(context);
}

TraceSeq CachedModel::Trace(TokenSpan context, TokenSpan continuation) const {
  const std::string& name = inner_->Info().name;
  if (auto hit = cache_.Get(name, context, continuation)) return *hit;
  ++inner_calls_;
  TraceSeq traces = inner_->Trace(context, continuation);
  cache_.Put(name, context, continuation, traces);
  return traces;
}

TextTrace CachedModel::TraceText(std::string_view context_text,
                                 std::string_view continuation_text,
                                 bool lowercase) const {
  TextTrace out;
  const std::string ctx =
      lowercase ? ToLowerUtf8(context_text) : std::string(context_text);
  const std::string cont = lowercase ? ToLowerUtf8(continuation_text)
                                     : std::string(continuation_text);
  out.context_tokens = Tokenize(ctx);
  out.tokens = Tokenize(cont);
  out.traces = Trace(out.context_tokens, out.tokens);
  return out;
}

}  // namespace vp
