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
#include "vp/memlab/keidetic.h"

#include <algorithm>
#include <deque>

#include "vp/core/error.h"

namespace vp {

std::size_t KEideticCountNaive(const std::vector<TokenSeq>& corpus,
                               TokenSpan s) {
  if (s.empty()) Fail(ErrorKind::kInput, "k-eidetic pattern is empty");
  std::size_t count = 0;
  for (const TokenSeq& doc : corpus) {
    if (doc.size() < s.size()) continue;
    for (std::size_t i = 0; i + s.size() <= doc.size(); ++i) {
      if (std::equal(s.begin(), s.end(), doc.begin() + static_cast<std::ptrdiff_t>(i))) {
        ++count;
        break;
      }
    }
  }
  return count;
}

PatternCounter::PatternCounter(const std::vector<TokenSeq>& patterns)
    : n_patterns_(patterns.size()) {
  nodes_.emplace_back();
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    if (patterns[p].empty()) {
      Fail(ErrorKind::kInput, "k-eidetic pattern is empty");
    }
    int state = 0;
    for (Token t : patterns[p]) {
      const auto it = nodes_[state].next.find(t);
      if (it != nodes_[state].next.end()) {
        state = it->second;
      } else {
        const int child = static_cast<int>(nodes_.size());
        nodes_[state].next.emplace(t, child);
        nodes_.emplace_back();
        state = child;
      }
    }
    nodes_[state].ends.push_back(p);
  }
  // Breadth-first failure links.
  std::deque<int> queue;
  for (const auto& [t, child] : nodes_[0].next) queue.push_back(child);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (const auto& [t, v] : nodes_[u].next) {
      int f = nodes_[u].fail;
      while (f != 0 && !nodes_[f].next.contains(t)) f = nodes_[f].fail;
      const auto it = nodes_[f].next.find(t);
      nodes_[v].fail = (it != nodes_[f].next.end() && it->second != v) ? it->second : 0;
      const int fv = nodes_[v].fail;
      nodes_[v].output_link = nodes_[fv].ends.empty() ? nodes_[fv].output_link : fv;
      queue.push_back(v);
    }
  }
}

int PatternCounter::Step(int state, Token t) const {
  while (true) {
    const auto it = nodes_[state].next.find(t);
    if (it != nodes_[state].next.end()) return it->second;
    if (state == 0) return 0;
    state = nodes_[state].fail;
  }
}

std::vector<std::size_t> PatternCounter::CountExamples(
    const std::vector<TokenSeq>& corpus) const {
  std::vector<std::size_t> counts(n_patterns_, 0);
  // Per-node stamp of the last example that reached it, so each example
  // credits a pattern at most once and shared suffix chains are walked once.
  std::vector<std::size_t> node_stamp(nodes_.size(), 0);
  std::size_t stamp = 0;
  for (const TokenSeq& doc : corpus) {
    ++stamp;
    int state = 0;
    for (Token t : doc) {
      state = Step(state, t);
      int hit = nodes_[state].ends.empty() ? nodes_[state].output_link : state;
      while (hit >= 0 && node_stamp[hit] != stamp) {
        node_stamp[hit] = stamp;
        for (std::size_t p : nodes_[hit].ends) ++counts[p];
        hit = nodes_[hit].output_link;
      }
    }
  }
  return counts;
}

std::size_t KEideticCount(const std::vector<TokenSeq>& corpus, TokenSpan s) {
  return PatternCounter({TokenSeq(s.begin(), s.end())}).CountExamples(corpus)[0];
}

}  // namespace vp
