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
#include "vp/lm/model.h"

#include <cmath>

#include <fmt/core.h>

#include "vp/core/error.h"
#include "vp/core/text.h"

namespace vp {

Token ArgmaxToken(std::span<const double> probs) {
  std::size_t best = 0;
  for (std::size_t v = 1; v < probs.size(); ++v) {
    if (probs[v] > probs[best]) best = v;
  }
  return static_cast<Token>(best);
}

TokenTrace MakeTrace(std::span<const double> probs, Token token) {
  if (token >= probs.size()) {
    Fail(ErrorKind::kDomain, fmt::format("token {} outside vocabulary of {}",
                                         token, probs.size()));
  }
  double mu = 0.0;
  for (double p : probs) {
    if (p > 0.0) mu += p * std::log(p);
  }
  double var = 0.0;
  for (double p : probs) {
    if (p > 0.0) {
      const double d = std::log(p) - mu;
      var += p * d * d;
    }
  }
  TokenTrace t;
  t.token = token;
  t.logprob = std::log(probs[token]);
  t.mu = mu;
  t.sigma = std::sqrt(var);
  t.entropy = -mu;
  t.argmax_token = ArgmaxToken(probs);
  t.argmax_logprob = std::log(probs[t.argmax_token]);
  return t;
}

TraceSeq LanguageModel::Trace(TokenSpan context, TokenSpan continuation) const {
  if (continuation.empty()) {
    Fail(ErrorKind::kInput, "trace requires a nonempty continuation");
  }
  TokenSeq window(context.begin(), context.end());
  window.reserve(context.size() + continuation.size());
  TraceSeq traces;
  traces.reserve(continuation.size());
  for (Token token : continuation) {
    const std::vector<double> probs = NextDistribution(window);
    traces.push_back(MakeTrace(probs, token));
    window.push_back(token);
  }
  return traces;
}

TextTrace LanguageModel::TraceText(std::string_view context_text,
                                   std::string_view continuation_text,
                                   bool lowercase) const {
  TextTrace out;
  if (lowercase) {
    out.context_tokens = Tokenize(ToLowerUtf8(context_text));
    out.tokens = Tokenize(ToLowerUtf8(continuation_text));
  } else {
    out.context_tokens = Tokenize(context_text);
    out.tokens = Tokenize(continuation_text);
  }
  out.traces = Trace(out.context_tokens, out.tokens);
  return out;
}

}  // namespace vp
