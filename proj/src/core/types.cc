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
#include "vp/core/types.h"

#include <cmath>

#include <fmt/core.h>

namespace vp {

std::optional<std::string> CheckTrace(const TokenTrace& t,
                                      double entropy_tolerance) {
  const double values[] = {t.logprob, t.mu,      t.sigma,
                           t.entropy, t.argmax_logprob};
  for (double v : values) {
    if (!std::isfinite(v)) return "non-finite field in trace";
  }
  if (t.logprob > t.argmax_logprob) {
    return fmt::format("logprob {} exceeds argmax_logprob {}", t.logprob,
                       t.argmax_logprob);
  }
  if (t.argmax_logprob > 0.0) {
    return fmt::format("argmax_logprob {} is positive", t.argmax_logprob);
  }
  if (t.sigma < 0.0) return fmt::format("sigma {} is negative", t.sigma);
  if (t.entropy < 0.0) {
    return fmt::format("entropy {} is negative", t.entropy);
  }
  if (std::abs(t.entropy + t.mu) > entropy_tolerance) {
    return fmt::format("entropy {} and mu {} disagree", t.entropy, t.mu);
  }
  if (!(std::exp(t.logprob) > 0.0)) return "token probability underflows";
  return std::nullopt;
}

double SumLogprob(std::span<const TokenTrace> traces) {
  double sum = 0.0;
  for (const TokenTrace& t : traces) sum += t.logprob;
  return sum;
}

}  // namespace vp
