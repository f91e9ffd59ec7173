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
#include "vp/lm/ngram.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <fmt/core.h>

#include "vp/core/error.h"

namespace vp {
namespace {

constexpr char kMagic[4] = {'N', 'G', 'L', 'M'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kMaxContext = std::size_t{1} << 30;

static_assert(std::endian::native == std::endian::little,
              "model files are written little-endian");

template <typename T>
void WritePod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T ReadPod(std::istream& in, const std::filesystem::path& path) {
  T value;
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    Fail(ErrorKind::kParse, "truncated model file " + path.string());
  }
  return value;
}

void CheckLambdas(const std::vector<double>& lambdas, int order) {
  if (static_cast<int>(lambdas.size()) != order) {
    Fail(ErrorKind::kTraining,
         fmt::format("expected {} interpolation weights, got {}", order,
                     lambdas.size()));
  }
  double sum = 0.0;
  for (double l : lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      Fail(ErrorKind::kTraining, "interpolation weights must be nonnegative");
    }
    sum += l;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    Fail(ErrorKind::kTraining,
         fmt::format("interpolation weights sum to {}, not 1", sum));
  }
}

}  // namespace

std::vector<double> GeometricLambdas(int order, double ratio) {
  std::vector<double> lambdas(static_cast<std::size_t>(order));
  double w = 1.0;
  double sum = 0.0;
  for (double& l : lambdas) {
    l = w;
    sum += w;
    w *= ratio;
  }
  for (double& l : lambdas) l /= sum;
  return lambdas;
}

std::string NGramModel::Key(TokenSpan context) const {
  std::string key;
  if (byte_keys_) {
    key.resize(context.size());
    for (std::size_t i = 0; i < context.size(); ++i) {
      key[i] = static_cast<char>(context[i]);
    }
  } else {
    key.resize(context.size() * sizeof(Token));
    std::memcpy(key.data(), context.data(), key.size());
  }
  return key;
}

const NGramModel::ContextCounts* NGramModel::Find(TokenSpan context) const {
  if (context.size() >= tables_.size()) return nullptr;
  const Table& table = tables_[context.size()];
  auto it = table.find(Key(context));
  return it == table.end() ? nullptr : &it->second;
}

std::vector<double> NGramModel::NextDistribution(TokenSpan context) const {
  const std::size_t vocab = info_.vocab_size;
  for (Token t : context) {
    if (t >= vocab) {
      Fail(ErrorKind::kDomain,
           fmt::format("context token {} outside vocabulary of {}", t, vocab));
    }
  }
  const ContextCounts* active[64];
  double weights[64];
  int n_active = 0;
  double weight_sum = 0.0;
  for (int n = 1; n <= order_; ++n) {
    const std::size_t len = static_cast<std::size_t>(n - 1);
    if (context.size() < len) break;
    const ContextCounts* counts = Find(context.subspan(context.size() - len));
    if (counts == nullptr || counts->total == 0) continue;
    active[n_active] = counts;
    weights[n_active] = lambdas_[n - 1];
    weight_sum += lambdas_[n - 1];
    ++n_active;
  }
  std::vector<double> probs(vocab, 0.0);
  if (weight_sum <= 0.0) {
    std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(vocab));
    return probs;
  }
  for (int i = 0; i < n_active; ++i) {
    const double scale =
        weights[i] / weight_sum / static_cast<double>(active[i]->total);
    for (const auto& [token, count] : active[i]->next) {
      probs[token] += scale * static_cast<double>(count);
    }
  }
  const double keep = 1.0 - epsilon_ * static_cast<double>(vocab);
  for (double& p : probs) p = keep * p + epsilon_;
  return probs;
}

TokenSeq NGramModel::Tokenize(std::string_view text) const {
  if (!byte_keys_ || info_.vocab_size != kByteVocab) {
    Fail(ErrorKind::kUnsupported,
         "text tokenization needs a byte-vocabulary model");
  }
  TokenSeq tokens(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    tokens[i] = static_cast<unsigned char>(text[i]);
  }
  return tokens;
}

std::string NGramModel::Detokenize(TokenSpan tokens) const {
  if (!byte_keys_ || info_.vocab_size != kByteVocab) {
    Fail(ErrorKind::kUnsupported,
         "detokenization needs a byte-vocabulary model");
  }
  std::string text(tokens.size(), '\0');
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] >= kByteVocab) {
      Fail(ErrorKind::kDomain, fmt::format("token {} is not a byte", tokens[i]));
    }
    text[i] = static_cast<char>(tokens[i]);
  }
  return text;
}

void NGramModel::Finalize() {
  for (Table& table : tables_) {
    for (auto& [key, counts] : table) {
      std::sort(counts.next.begin(), counts.next.end());
      counts.next.shrink_to_fit();
    }
  }
  epsilon_ = 1.0 / (static_cast<double>(info_.vocab_size) * 1e6);
}

std::shared_ptr<const NGramModel> TrainNGram(
    const std::vector<TokenSeq>& corpus, int order,
    std::vector<double> lambdas, std::size_t vocab_size, std::string name) {
  if (order < 1 || order > 64) {
    Fail(ErrorKind::kTraining, fmt::format("order {} not in [1, 64]", order));
  }
  if (vocab_size < 2) Fail(ErrorKind::kTraining, "vocab_size must be >= 2");
  if (lambdas.empty()) lambdas = GeometricLambdas(order);
  CheckLambdas(lambdas, order);
  std::shared_ptr<NGramModel> model(new NGramModel());
  model->info_ = {std::move(name), vocab_size, kMaxContext};
  model->order_ = order;
  model->lambdas_ = std::move(lambdas);
  model->byte_keys_ = vocab_size <= kByteVocab;
  model->tables_.resize(static_cast<std::size_t>(order));
  for (const TokenSeq& seq : corpus) {
    for (Token t : seq) {
      if (t >= vocab_size) {
        Fail(ErrorKind::kTraining,
             fmt::format("corpus token {} outside vocabulary of {}", t,
                         vocab_size));
      }
    }
    const std::string packed = model->Key(seq);
    const std::size_t width = model->byte_keys_ ? 1 : sizeof(Token);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const Token next = seq[i];
      for (std::size_t len = 0; len < static_cast<std::size_t>(order) && len <= i;
           ++len) {
        auto [it, inserted] = model->tables_[len].try_emplace(
            packed.substr((i - len) * width, len * width));
        NGramModel::ContextCounts& counts = it->second;
        ++counts.total;
        auto found = std::find_if(
            counts.next.begin(), counts.next.end(),
            [next](const auto& entry) { return entry.first == next; });
        if (found == counts.next.end()) {
          counts.next.emplace_back(next, 1);
        } else {
          ++found->second;
        }
      }
    }
    model->trained_tokens_ += seq.size();
  }
  if (model->trained_tokens_ == 0) {
    Fail(ErrorKind::kTraining, "cannot train on an empty corpus");
  }
  model->Finalize();
  return model;
}

std::shared_ptr<const NGramModel> TrainByteNGram(
    const std::vector<std::string>& texts, int order,
    std::vector<double> lambdas, std::string name) {
  std::vector<TokenSeq> corpus;
  corpus.reserve(texts.size());
  for (const std::string& text : texts) {
    TokenSeq seq(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      seq[i] = static_cast<unsigned char>(text[i]);
    }
    corpus.push_back(std::move(seq));
  }
  return TrainNGram(corpus, order, std::move(lambdas), kByteVocab,
                    std::move(name));
}

void NGramModel::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  WritePod<std::uint32_t>(out, kVersion);
  WritePod<std::uint32_t>(out, static_cast<std::uint32_t>(order_));
  WritePod<std::uint32_t>(out, static_cast<std::uint32_t>(info_.vocab_size));
  for (double l : lambdas_) WritePod<double>(out, l);
  WritePod<std::uint64_t>(out, trained_tokens_);
  const std::size_t width = byte_keys_ ? 1 : sizeof(Token);
  for (std::size_t len = 0; len < tables_.size(); ++len) {
    std::vector<std::pair<TokenSeq, const ContextCounts*>> entries;
    entries.reserve(tables_[len].size());
    for (const auto& [key, counts] : tables_[len]) {
      TokenSeq context(len);
      for (std::size_t i = 0; i < len; ++i) {
        if (byte_keys_) {
          context[i] = static_cast<unsigned char>(key[i]);
        } else {
          std::memcpy(&context[i], key.data() + i * width, sizeof(Token));
        }
      }
      entries.emplace_back(std::move(context), &counts);
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    WritePod<std::uint64_t>(out, entries.size());
    for (const auto& [context, counts] : entries) {
      for (Token t : context) WritePod<std::uint32_t>(out, t);
      WritePod<std::uint32_t>(out, static_cast<std::uint32_t>(counts->next.size()));
      for (const auto& [token, count] : counts->next) {
        WritePod<std::uint32_t>(out, token);
        WritePod<std::uint64_t>(out, count);
      }
    }
  }
  if (!out) Fail(ErrorKind::kIo, "failed writing " + path.string());
}

std::shared_ptr<const NGramModel> NGramModel::Load(
    const std::filesystem::path& path, std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open model " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    Fail(ErrorKind::kParse, path.string() + " is not an NGLM model file");
  }
  const auto version = ReadPod<std::uint32_t>(in, path);
  if (version != kVersion) {
    Fail(ErrorKind::kParse,
         fmt::format("{}: unsupported model version {}", path.string(), version));
  }
  std::shared_ptr<NGramModel> model(new NGramModel());
  model->order_ = static_cast<int>(ReadPod<std::uint32_t>(in, path));
  const std::size_t vocab = ReadPod<std::uint32_t>(in, path);
  if (model->order_ < 1 || model->order_ > 64 || vocab < 2) {
    Fail(ErrorKind::kParse, path.string() + ": bad model header");
  }
  model->info_ = {std::move(name), vocab, kMaxContext};
  model->byte_keys_ = vocab <= kByteVocab;
  for (int n = 0; n < model->order_; ++n) {
    model->lambdas_.push_back(ReadPod<double>(in, path));
  }
  CheckLambdas(model->lambdas_, model->order_);
  model->trained_tokens_ = ReadPod<std::uint64_t>(in, path);
  model->tables_.resize(static_cast<std::size_t>(model->order_));
  for (std::size_t len = 0; len < model->tables_.size(); ++len) {
    const auto n_contexts = ReadPod<std::uint64_t>(in, path);
    for (std::uint64_t c = 0; c < n_contexts; ++c) {
      TokenSeq context(len);
      for (Token& t : context) t = ReadPod<std::uint32_t>(in, path);
      ContextCounts counts;
      const auto n_next = ReadPod<std::uint32_t>(in, path);
      for (std::uint32_t k = 0; k < n_next; ++k) {
        const Token token = ReadPod<std::uint32_t>(in, path);
        const auto count = ReadPod<std::uint64_t>(in, path);
        if (token >= vocab) {
          Fail(ErrorKind::kParse, path.string() + ": token outside vocabulary");
        }
        counts.next.emplace_back(token, count);
        counts.total += count;
      }
      model->tables_[len].emplace(model->Key(context), std::move(counts));
    }
  }
  model->Finalize();
  return model;
}

}  // namespace vp
