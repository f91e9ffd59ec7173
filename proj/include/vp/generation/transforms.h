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
#ifndef VP_GENERATION_TRANSFORMS_H_
#define VP_GENERATION_TRANSFORMS_H_

#include <span>
#include <vector>

#include "vp/core/types.h"
#include "vp/generation/config.h"

namespace vp {

// Pure logit / probability transforms used by the sampler. Truncating
// transforms return a renormalized vector of the same length with zeros
// outside the kept support; boundary ties keep the lower token id.

std::vector<double> Softmax(std::span<const double> logits);

std::vector<double> ApplyTemperature(std::span<const double> logits,
                                     double temperature);

// Every token in `seen` (counted once) has its logit divided by `penalty`
// when positive and multiplied by it otherwise.
std::vector<double> ApplyRepetitionPenalty(std::span<const double> logits,
                                           TokenSpan seen, double penalty);

std::vector<double> ApplyTopK(std::span<const double> probs, int k);

// Keeps the smallest probability-sorted prefix with mass >= p.
std::vector<double> ApplyNucleus(std::span<const double> probs, double p);

// Ranks tokens by |-ln p_v - H| and keeps the smallest prefix with mass
// >= phi.
std::vector<double> ApplyTypical(std::span<const double> probs, double phi);

// Full chain in fixed order: repetition penalty -> temperature -> softmax ->
// top-k -> nucleus -> typical -> renormalize. The logit stage is skipped
// entirely when neither penalty nor temperature is active, so neutral
// settings return `probs` unchanged.
std::vector<double> TransformDistribution(std::span<const double> probs,
                                          const GenerationConfig& config,
                                          TokenSpan seen);

}  // namespace vp

#endif  // VP_GENERATION_TRANSFORMS_H_
