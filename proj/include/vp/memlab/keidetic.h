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
#ifndef VP_MEMLAB_KEIDETIC_H_
#define VP_MEMLAB_KEIDETIC_H_

#include <map>
#include <vector>

#include "vp/core/types.h"

namespace vp {

// Number of corpus examples containing `s` contiguously; repeats inside one
// example count once. Straight scan, kept as the reference.
std::size_t KEideticCountNaive(const std::vector<TokenSeq>& corpus,
                               TokenSpan s);

// Set-matching automaton over token patterns (Aho-Corasick).
class PatternCounter {
 public:
  // Throws Error(kInput) on an empty pattern.
  explicit PatternCounter(const std::vector<TokenSeq>& patterns);

  // For each pattern, the number of examples containing it.
  std::vector<std::size_t> CountExamples(
      const std::vector<TokenSeq>& corpus) const;

 private:
  struct Node {
    std::map<Token, int> next;
    int fail = 0;
    int output_link = -1;  // nearest proper suffix node ending a pattern
    std::vector<std::size_t> ends;  // patterns ending here
  };

  int Step(int state, Token t) const;

  std::vector<Node> nodes_;
  std::size_t n_patterns_ = 0;
};

std::size_t KEideticCount(const std::vector<TokenSeq>& corpus, TokenSpan s);

}  // namespace vp

#endif  // VP_MEMLAB_KEIDETIC_H_
