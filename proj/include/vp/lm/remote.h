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
#ifndef VP_LM_REMOTE_H_
#define VP_LM_REMOTE_H_

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>

#include <json.hpp>

#include "vp/lm/model.h"
#include "vp/lm/trace_cache.h"

namespace vp {

struct RemoteOptions {
  std::string endpoint;  // e.g. "http://127.0.0.1:8000"
  std::optional<std::string> auth_token;
  std::chrono::milliseconds timeout{30000};
  int max_inflight = 4;
  int max_retries = 4;
  std::chrono::milliseconds backoff_initial{100};
  std::chrono::milliseconds backoff_cap{5000};
  // Served moments come from accelerator math; |entropy + mu| is checked
  // against this bound.
  double trace_tolerance = 1e-4;
  std::size_t cache_capacity = 4096;
};

// Client for the /v1 model-serving protocol. Satisfies the LanguageModel
// contract except NextDistribution, which the protocol does not expose
// (servers ship per-step moments instead of full vectors); sampling happens
// server side through GenerateNative.
//
// Every served trace is validated before use. Transport failures and
// retriable 503 responses are retried with exponential backoff.
class RemoteModel final : public LanguageModel {
 public:
  explicit RemoteModel(RemoteOptions options);
  ~RemoteModel() override;

  const LmInfo& Info() const override;
  std::vector<double> NextDistribution(TokenSpan context) const override;
  TraceSeq Trace(TokenSpan context, TokenSpan continuation) const override;
  TokenSeq Tokenize(std::string_view text) const override;
  std::string Detokenize(TokenSpan tokens) const override;
  TextTrace TraceText(std::string_view context_text,
                      std::string_view continuation_text,
                      bool lowercase) const override;
  std::optional<std::vector<GeneratedSequence>> GenerateNative(
      TokenSpan prefix, const GenerationConfig& config) const override;

  // Network requests issued, including retries.
  std::uint64_t request_count() const { return requests_.load(); }
  std::uint64_t retry_count() const { return retries_.load(); }

 private:
  nlohmann::json Call(const std::string& method, const std::string& path,
                      const nlohmann::json* body) const;
  TraceSeq ValidatedTraces(const nlohmann::json& response,
                           TokenSpan expected_tokens) const;

  RemoteOptions options_;
  mutable std::once_flag info_once_;
  mutable LmInfo info_;
  mutable std::counting_semaphore<1024> inflight_;
  mutable TraceCache cache_;
  mutable std::atomic<std::uint64_t> requests_{0};
  mutable std::atomic<std::uint64_t> retries_{0};
};

}  // namespace vp

#endif  // VP_LM_REMOTE_H_
