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
#ifndef VP_CORE_TYPES_H_
#define VP_CORE_TYPES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vp {

// Index into a model vocabulary.
using Token = std::uint32_t;
using TokenSeq = std::vector<Token>;
using TokenSpan = std::span<const Token>;

// Per-step scoring record for one observed token. All logs are natural.
//
// mu is the expected log-probability under the predictive distribution
// (sum_v P(v) log P(v)), sigma the standard deviation of log P(v) under the
// same distribution, and entropy = -mu.
struct TokenTrace {
  Token token = 0;
  double logprob = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  double entropy = 0.0;
  Token argmax_token = 0;
  double argmax_logprob = 0.0;

  friend bool operator==(const TokenTrace&, const TokenTrace&) = default;
};

using TraceSeq = std::vector<TokenTrace>;

// Returns a description of the first violated invariant, or nullopt when the
// trace is consistent. `entropy_tolerance` bounds |entropy + mu|.
std::optional<std::string> CheckTrace(const TokenTrace& trace,
                                      double entropy_tolerance = 1e-6);

// Sum of logprobs over a trace list.
double SumLogprob(std::span<const TokenTrace> traces);

struct ExtractionExample {
  std::string id;
  TokenSeq prefix_tokens;
  TokenSeq suffix_tokens;
  std::optional<std::string> prefix_text;
  std::optional<std::string> suffix_text;
};

struct ScoredCandidate {
  std::string example_id;
  std::size_t gen_index = 0;
  TokenSeq tokens;
  TraceSeq traces;
  std::map<std::string, double> scores;
};

}  // namespace vp

#endif  // VP_CORE_TYPES_H_
