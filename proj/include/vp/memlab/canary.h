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
#ifndef VP_MEMLAB_CANARY_H_
#define VP_MEMLAB_CANARY_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "vp/core/rng.h"

namespace vp {

struct CanarySpec {
  std::string template_id;
  std::string secret;  // digits
  int repetition = 1;
  std::string prefix_text;  // context immediately preceding the secret
  std::string full_text;
};

struct CanaryLayout {
  int n_background = 1450;
  std::map<int, int> counts = {{1, 100}, {2, 25}, {3, 25}, {4, 25}, {5, 25}};
  int secret_len = 10;
};

struct CanaryCorpus {
  std::vector<std::string> background;
  std::vector<CanarySpec> canaries;
  CanaryLayout layout;
  std::vector<std::string> documents;  // assembled, shuffled

  std::size_t canary_instances() const;
};

// Text of background document `index`.
using BackgroundGenerator = std::function<std::string(Rng&, std::size_t)>;

// Surrounding text for canary `index`: the part before the secret and the
// part after it.
struct CanaryFrame {
  std::string template_id;
  std::string before;
  std::string after;
};
using CanaryTemplate = std::function<CanaryFrame(Rng&, std::size_t)>;

// Synthetic email-like text. Salutations draw from a shared name pool. The
// frame at index i asks to call contact i % contact_names, and background
// mails quote random numbers for the same contacts, so a rarely repeated
// secret competes with unmemorized singletons after its context.
struct DeskMailStyle {
  int name_pool = 48;
  int contact_names = 200;
  double phone_lines_per_doc = 0.4;
};
BackgroundGenerator DeskBackground(DeskMailStyle style = {});
CanaryTemplate DeskCanaryTemplate(DeskMailStyle style = {});

std::string RandomDigits(Rng& rng, int length);

// Secrets are uniform digit strings, pairwise distinct, absent from the
// background and occurring in exactly `repetition` documents of the
// assembled corpus; offenders are redrawn up to 100 times before
// Error(kConstruction). `seed` fixes text, secrets and assembly order.
CanaryCorpus BuildCanaryCorpus(const CanaryLayout& layout,
                               const BackgroundGenerator& background,
                               const CanaryTemplate& frame,
                               std::uint64_t seed);

// Frames with fresh secrets that were never planted (repetition 0).
std::vector<CanarySpec> MakeControls(const CanaryCorpus& corpus,
                                     const CanaryTemplate& frame, int count,
                                     std::uint64_t seed);

}  // namespace vp

#endif  // VP_MEMLAB_CANARY_H_
