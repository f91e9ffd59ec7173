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
#ifndef VP_LM_MODEL_H_
#define VP_LM_MODEL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vp/core/types.h"
#include "vp/generation/config.h"

namespace vp {

struct LmInfo {
  std::string name;
  std::size_t vocab_size = 0;
  std::size_t max_context = 0;
};

struct TextTrace {
  TokenSeq context_tokens;
  TokenSeq tokens;
  TraceSeq traces;
};

struct GeneratedSequence {
  TokenSeq tokens;
  TraceSeq traces;
};

// Autoregressive model contract: a next-token distribution for any context,
// from which the chain-rule probability of a continuation follows.
//
// Implementations are immutable after construction and safe to share.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual const LmInfo& Info() const = 0;

  // Probability vector of length vocab_size, entries > 0, summing to 1.
  // Throws Error(kDomain) on out-of-vocabulary context tokens.
  virtual std::vector<double> NextDistribution(TokenSpan context) const = 0;

  // Trace i describes continuation[i] given context + continuation[0..i).
  // The default walks NextDistribution step by step.
  virtual TraceSeq Trace(TokenSpan context, TokenSpan continuation) const;

  virtual TokenSeq Tokenize(std::string_view text) const = 0;
  virtual std::string Detokenize(TokenSpan tokens) const = 0;

  // Tokenizes both texts (after Unicode simple lowercasing when asked) and
  // traces the continuation given the context.
  virtual TextTrace TraceText(std::string_view context_text,
                              std::string_view continuation_text,
                              bool lowercase) const;

  // Models that sample on their own side (remote servers) return the
  // candidates here; local models return nullopt and are sampled by the
  // generation module.
  virtual std::optional<std::vector<GeneratedSequence>> GenerateNative(
      TokenSpan /*prefix*/, const GenerationConfig& /*config*/) const {
    return std::nullopt;
  }
};

// Builds the trace for `token` from a full predictive distribution.
TokenTrace MakeTrace(std::span<const double> probs, Token token);

// Argmax with ties resolved toward the lower token id.
Token ArgmaxToken(std::span<const double> probs);

}  // namespace vp

#endif  // VP_LM_MODEL_H_
