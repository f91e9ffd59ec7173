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
#include "vp/memlab/canary.h"

#include <algorithm>
#include <array>
#include <set>

#include <fmt/core.h>

#include "vp/core/error.h"
#include "vp/memlab/keidetic.h"

namespace vp {
namespace {

constexpr std::array<const char*, 12> kSyllables = {
    "ka", "lo", "mi", "ra", "ne", "to", "su", "vi", "da", "fe", "po", "ju"};

constexpr std::array<const char*, 16> kSentences = {
    "The quarterly numbers are attached for review.",
    "Please confirm the meeting room for Thursday.",
    "I moved the deadline to the end of next week.",
    "Let me know if the draft needs more work.",
    "The shipment left the warehouse this morning.",
    "We still need sign-off from the legal team.",
    "Lunch is on me if the demo goes well.",
    "The server maintenance window starts at noon.",
    "Our budget request was approved yesterday.",
    "Can you forward the contract to the vendor?",
    "The new hires start on Monday.",
    "I left the printed slides on your desk.",
    "Travel receipts are due by Friday.",
    "The client asked for a revised estimate.",
    "Parking will be closed during the repairs.",
    "Thanks again for covering my shift."};

constexpr std::array<const char*, 6> kClosings = {
    "Best,", "Thanks,", "Regards,", "Cheers,", "See you soon,", "Talk later,"};

std::string Name(int pool, Rng& rng) {
  const int i = static_cast<int>(rng.Below(static_cast<std::uint64_t>(pool)));
  std::string name = std::string(kSyllables[i % 12]) +
                     kSyllables[(i % 12 + 5 * (i / 12)) % 12];
  name[0] = static_cast<char>(name[0] - 'a' + 'A');
  return name;
}

// Three syllables, distinct for i < 1728.
std::string Contact(int i) {
  std::string name = std::string(kSyllables[i % 12]) + kSyllables[(i / 12) % 12] +
                     kSyllables[(i / 144) % 12];
  name[0] = static_cast<char>(name[0] - 'a' + 'A');
  return name;
}

template <std::size_t N>
const char* Pick(const std::array<const char*, N>& items, Rng& rng) {
  return items[static_cast<std::size_t>(rng.Below(N))];
}

void CheckStyle(const DeskMailStyle& style) {
  if (style.name_pool < 1 || style.name_pool > 144) {
    Fail(ErrorKind::kConfig, "name_pool must be in [1, 144]");
  }
  if (style.contact_names < 1 || style.contact_names > 1728) {
    Fail(ErrorKind::kConfig, "contact_names must be in [1, 1728]");
  }
  if (!(style.phone_lines_per_doc >= 0.0 && style.phone_lines_per_doc <= 16.0)) {
    Fail(ErrorKind::kConfig, "phone_lines_per_doc must be in [0, 16]");
  }
}

std::vector<TokenSeq> AsBytes(const std::vector<std::string>& texts) {
  std::vector<TokenSeq> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) {
    TokenSeq seq;
    seq.reserve(t.size());
    for (unsigned char c : t) seq.push_back(c);
    out.push_back(std::move(seq));
  }
  return out;
}

TokenSeq Bytes(const std::string& s) {
  return TokenSeq(s.begin(), s.end());
}

}  // namespace

std::size_t CanaryCorpus::canary_instances() const {
  std::size_t n = 0;
  for (const CanarySpec& c : canaries) n += static_cast<std::size_t>(c.repetition);
  return n;
}

BackgroundGenerator DeskBackground(DeskMailStyle style) {
  CheckStyle(style);
  return [style](Rng& rng, std::size_t) {
    std::string text = fmt::format("Hi {},\n{} {}\n", Name(style.name_pool, rng),
                                   Pick(kSentences, rng), Pick(kSentences, rng));
    int lines = static_cast<int>(style.phone_lines_per_doc);
    if (rng.Uniform() < style.phone_lines_per_doc - lines) ++lines;
    for (int i = 0; i < lines; ++i) {
      const int contact = static_cast<int>(
          rng.Below(static_cast<std::uint64_t>(style.contact_names)));
      text += fmt::format("Call {} at {}.\n", Contact(contact), RandomDigits(rng, 10));
    }
    text += fmt::format("{}\n{}\n", Pick(kClosings, rng), Name(style.name_pool, rng));
    return text;
  };
}

CanaryTemplate DeskCanaryTemplate(DeskMailStyle style) {
  CheckStyle(style);
  return [style](Rng& rng, std::size_t index) {
    CanaryFrame f;
    f.template_id = "desk_mail";
    const int contact = static_cast<int>(index % static_cast<std::size_t>(style.contact_names));
    f.before = fmt::format("Hi {},\n{}\nCall {} at ", Name(style.name_pool, rng),
                           Pick(kSentences, rng), Contact(contact));
    f.after = fmt::format(".\n{}\n{}\n", Pick(kClosings, rng),
                          Name(style.name_pool, rng));
    return f;
  };
}

std::string RandomDigits(Rng& rng, int length) {
  std::string s;
  for (int i = 0; i < length; ++i) s += static_cast<char>('0' + rng.Below(10));
  return s;
}

CanaryCorpus BuildCanaryCorpus(const CanaryLayout& layout,
                               const BackgroundGenerator& background,
                               const CanaryTemplate& frame, std::uint64_t seed) {
  if (layout.n_background < 0 || layout.secret_len < 1) {
    Fail(ErrorKind::kConfig, "canary layout counts must be >= 0");
  }
  CanaryCorpus corpus;
  corpus.layout = layout;
  Rng bg_rng = SeededRng(seed, "background");
  for (int i = 0; i < layout.n_background; ++i) {
    corpus.background.push_back(background(bg_rng, static_cast<std::size_t>(i)));
  }
  Rng frame_rng = SeededRng(seed, "frames");
  Rng secret_rng = SeededRng(seed, "secrets");
  std::vector<CanaryFrame> frames;
  for (const auto& [rep, count] : layout.counts) {
    if (rep < 1 || count < 0) {
      Fail(ErrorKind::kConfig, "canary layout counts must be >= 0");
    }
    for (int i = 0; i < count; ++i) {
      frames.push_back(frame(frame_rng, frames.size()));
      CanarySpec spec;
      spec.template_id = frames.back().template_id;
      spec.repetition = rep;
      spec.prefix_text = frames.back().before;
      corpus.canaries.push_back(std::move(spec));
    }
  }
  for (CanarySpec& c : corpus.canaries) {
    c.secret = RandomDigits(secret_rng, layout.secret_len);
  }

  const std::vector<TokenSeq> background_bytes = AsBytes(corpus.background);
  for (int attempt = 0;; ++attempt) {
    for (std::size_t i = 0; i < corpus.canaries.size(); ++i) {
      CanarySpec& c = corpus.canaries[i];
      c.full_text = frames[i].before + c.secret + frames[i].after;
    }
    // Candidate corpus without shuffling; order does not affect counts.
    std::vector<TokenSeq> docs = background_bytes;
    for (const CanarySpec& c : corpus.canaries) {
      for (int r = 0; r < c.repetition; ++r) docs.push_back(Bytes(c.full_text));
    }
    std::vector<TokenSeq> patterns;
    for (const CanarySpec& c : corpus.canaries) patterns.push_back(Bytes(c.secret));
    const std::vector<std::size_t> counts =
        patterns.empty() ? std::vector<std::size_t>{}
                         : PatternCounter(patterns).CountExamples(docs);
    std::set<std::string> seen;
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < corpus.canaries.size(); ++i) {
      const CanarySpec& c = corpus.canaries[i];
      const bool duplicate = !seen.insert(c.secret).second;
      if (duplicate || counts[i] != static_cast<std::size_t>(c.repetition) ||
          c.full_text.find(c.secret) != frames[i].before.size() ||
          c.full_text.find(c.secret, frames[i].before.size() + 1) != std::string::npos) {
        bad.push_back(i);
      }
    }
    if (bad.empty()) break;
    if (attempt >= 100) {
      Fail(ErrorKind::kConstruction,
           fmt::format("{} canary secret(s) still collide after 100 redraws",
                       bad.size()));
    }
    for (std::size_t i : bad) {
      corpus.canaries[i].secret = RandomDigits(secret_rng, layout.secret_len);
    }
  }

  corpus.documents = corpus.background;
  for (const CanarySpec& c : corpus.canaries) {
    for (int r = 0; r < c.repetition; ++r) corpus.documents.push_back(c.full_text);
  }
  Rng order_rng = SeededRng(seed, "assembly");
  order_rng.Shuffle(std::span<std::string>(corpus.documents));
  return corpus;
}

std::vector<CanarySpec> MakeControls(const CanaryCorpus& corpus,
                                     const CanaryTemplate& frame, int count,
                                     std::uint64_t seed) {
  Rng frame_rng = SeededRng(seed, "control-frames");
  Rng secret_rng = SeededRng(seed, "control-secrets");
  std::set<std::string> taken;
  for (const CanarySpec& c : corpus.canaries) taken.insert(c.secret);
  const std::vector<TokenSeq> docs = AsBytes(corpus.documents);
  std::vector<CanarySpec> controls;
  for (int i = 0; i < count; ++i) {
    const CanaryFrame f = frame(frame_rng, static_cast<std::size_t>(i));
    CanarySpec c;
    c.template_id = f.template_id;
    c.repetition = 0;
    c.prefix_text = f.before;
    for (int attempt = 0;; ++attempt) {
      c.secret = RandomDigits(secret_rng, corpus.layout.secret_len);
      if (!taken.contains(c.secret) && KEideticCount(docs, Bytes(c.secret)) == 0) {
        break;
      }
      if (attempt >= 100) {
        Fail(ErrorKind::kConstruction, "control secret collides after 100 redraws");
      }
    }
    taken.insert(c.secret);
    c.full_text = f.before + c.secret + f.after;
    controls.push_back(std::move(c));
  }
  return controls;
}

}  // namespace vp
