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
#ifndef VP_TESTING_HAND_CASES_H_
#define VP_TESTING_HAND_CASES_H_

#include <string>
#include <vector>

#include "vp/core/types.h"

namespace vp::testing {

struct HandCase {
  std::string name;
  double got = 0.0;
  double expected = 0.0;
  double tolerance = 1e-9;

  bool ok() const;
};

// Hand-worked score values, shared by the unit suite and the acceptance
// binary. Zlib lengths are checked against the test-only inflater and a
// length frozen from an independent zlib build.
std::vector<HandCase> ScoreHandCases();

// Trace with the given logprob; the remaining fields are consistent but
// otherwise arbitrary unless set.
TokenTrace MakeHandTrace(double logprob, double mu = -2.0, double sigma = 1.0,
                         double argmax_logprob = 0.0, Token token = 1,
                         Token argmax_token = 1);
TraceSeq HandTraces(const std::vector<double>& logprobs);

}  // namespace vp::testing

#endif  // VP_TESTING_HAND_CASES_H_
