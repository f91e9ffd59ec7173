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
#ifndef VP_CORE_SCORE_CONFIG_H_
#define VP_CORE_SCORE_CONFIG_H_

namespace vp {

// Hyperparameters shared by the membership scores.
struct ScoreConfig {
  double min_k_fraction = 0.2;
  double surp_low_threshold = 0.4;
  double surp_entropy_max = 2.0;  // nats
  double hc_tau = 0.9;
  double hc_alpha = 1.0;
  int recall_num_prefixes = 1;
  int recall_prefix_len = 128;
  double conrecall_gamma = 1.0;
  double outlier_sigma_mult = 3.0;

  // Throws Error(kConfig) naming the first out-of-bounds field.
  void Validate() const;
};

}  // namespace vp

#endif  // VP_CORE_SCORE_CONFIG_H_
