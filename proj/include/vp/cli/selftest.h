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
#ifndef VP_CLI_SELFTEST_H_
#define VP_CLI_SELFTEST_H_

#include <cstdint>
#include <string>
#include <vector>

namespace vp {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// AUROC rank statistic against brute-force pairwise counting on random
// score sets with ties (exact), and trapezoid agreement within 1e-9.
CheckResult CheckRocOracle(int n_sets, std::uint64_t seed);

// Score identities on random trace sets: Min-K(1.0) and
// High-Confidence(alpha = 0) equal Likelihood, Con-ReCaLL(gamma = 0)
// equals -ReCaLL, Outlier-Robust equals Likelihood without outliers.
CheckResult CheckScoreIdentities(int n_sets, std::uint64_t seed);

// Aho-Corasick counter against the naive scan on random corpora.
CheckResult CheckKEideticOracle(int n_cases, std::uint64_t seed);

std::vector<CheckResult> RunSelftest(std::uint64_t seed = 20261019);

}  // namespace vp

#endif  // VP_CLI_SELFTEST_H_
