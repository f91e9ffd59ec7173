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
#include "vp/core/score_config.h"

#include <cmath>

#include <fmt/core.h>

#include "vp/core/error.h"

namespace vp {
namespace {

void Require(bool ok, const char* field, double value, const char* bound) {
  if (!ok) {
    Fail(ErrorKind::kConfig,
         fmt::format("scores.{} = {} is out of bounds (must be {})", field,
                     value, bound));
  }
}

}  // namespace

void ScoreConfig::Validate() const {
  Require(min_k_fraction > 0.0 && min_k_fraction <= 1.0, "min_k_fraction",
          min_k_fraction, "in (0, 1]");
  Require(surp_low_threshold > 0.0 && surp_low_threshold <= 1.0,
          "surp_low_threshold", surp_low_threshold, "in (0, 1]");
  Require(surp_entropy_max >= 0.0 && std::isfinite(surp_entropy_max),
          "surp_entropy_max", surp_entropy_max, ">= 0");
  Require(hc_tau > 0.0 && hc_tau < 1.0, "hc_tau", hc_tau, "in (0, 1)");
  Require(hc_alpha >= 0.0 && std::isfinite(hc_alpha), "hc_alpha", hc_alpha,
          ">= 0");
  Require(recall_num_prefixes >= 1, "recall_num_prefixes",
          recall_num_prefixes, ">= 1");
  Require(recall_prefix_len >= 1, "recall_prefix_len", recall_prefix_len,
          ">= 1");
  Require(std::isfinite(conrecall_gamma), "conrecall_gamma", conrecall_gamma,
          "finite");
  Require(outlier_sigma_mult > 0.0 && std::isfinite(outlier_sigma_mult),
          "outlier_sigma_mult", outlier_sigma_mult, "> 0");
}

}  // namespace vp
