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
#ifndef VP_CORE_RNG_H_
#define VP_CORE_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace vp {

// Deterministic random stream. The engine is mt19937_64, whose output is
// fixed by the standard; the derived draws below avoid the
// implementation-defined std distributions so streams replay across
// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t Below(std::uint64_t n);

  // Standard normal via Box-Muller.
  double Normal();

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// 64-bit FNV-1a.
std::uint64_t HashBytes(std::string_view bytes);

// Stream for (seed, label); equal pairs give equal streams and different
// labels give unrelated sub-seeds.
Rng SeededRng(std::uint64_t seed, std::string_view stream_label);

std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view stream_label);

}  // namespace vp

#endif  // VP_CORE_RNG_H_
