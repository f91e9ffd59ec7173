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
#ifndef VP_LM_NGRAM_H_
#define VP_LM_NGRAM_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vp/lm/model.h"

namespace vp {

inline constexpr std::size_t kByteVocab = 256;

// Interpolated (Jelinek-Mercer) n-gram model with an additive floor.
//
//   P(v | h) = (1 - V*eps) * sum_n w_n * c_n(h_n, v) / c_n(h_n) + eps
//
// where h_n is the last n-1 tokens of h, eps = 1 / (V * 1e6) and w_n is
// lambda_n renormalized over the orders whose context was observed in
// training. Order 1 (empty context) is always observed, so short or novel
// contexts back off to lower orders and the result stays normalized.
//
// With vocab_size == 256 the model tokenizes text as raw bytes.
class NGramModel final : public LanguageModel {
 public:
  struct ContextCounts {
    std::uint64_t total = 0;
    std::vector<std::pair<Token, std::uint64_t>> next;  // sorted by token
  };

  const LmInfo& Info() const override { return info_; }
  std::vector<double> NextDistribution(TokenSpan context) const override;
  TokenSeq Tokenize(std::string_view text) const override;
  std::string Detokenize(TokenSpan tokens) const override;

  int order() const { return order_; }
  std::size_t vocab_size() const { return info_.vocab_size; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  std::uint64_t trained_tokens() const { return trained_tokens_; }
  double floor_epsilon() const { return epsilon_; }

  // Counts for the exact context (length order_n - 1), or nullptr.
  const ContextCounts* Find(TokenSpan context) const;

  void Save(const std::filesystem::path& path) const;
  static std::shared_ptr<const NGramModel> Load(
      const std::filesystem::path& path, std::string name = "ngram");

 private:
  friend std::shared_ptr<const NGramModel> TrainNGram(
      const std::vector<TokenSeq>&, int, std::vector<double>, std::size_t,
      std::string);

  using Table = std::unordered_map<std::string, ContextCounts>;

  NGramModel() = default;
  std::string Key(TokenSpan context) const;
  void Finalize();

  LmInfo info_;
  int order_ = 1;
  std::vector<double> lambdas_;
  std::vector<Table> tables_;  // tables_[n-1] holds contexts of length n-1
  std::uint64_t trained_tokens_ = 0;
  double epsilon_ = 0.0;
  bool byte_keys_ = false;
};

// Default interpolation weights: lambda_n proportional to 2^(n-1), so the
// highest order always carries more than half of the mass.
std::vector<double> GeometricLambdas(int order, double ratio = 2.0);

// Counts every window of every sequence; windows never span sequences.
// Throws Error(kTraining) on an empty corpus or invalid lambdas.
std::shared_ptr<const NGramModel> TrainNGram(
    const std::vector<TokenSeq>& corpus, int order,
    std::vector<double> lambdas, std::size_t vocab_size,
    std::string name = "ngram");

// Byte-level convenience: trains on the raw bytes of each text.
std::shared_ptr<const NGramModel> TrainByteNGram(
    const std::vector<std::string>& texts, int order,
    std::vector<double> lambdas = {}, std::string name = "ngram");

}  // namespace vp

#endif  // VP_LM_NGRAM_H_
