// Copyright 2026 The ATK Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ATK_LM_H_
#define ATK_LM_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "atk/placeholder_codec.h"
#include "atk/vocab.h"

namespace atk {

// Conditional next-token model p(. | source, prefix). Decoders depend only on
// this interface.
class ScoringModel {
 public:
  virtual ~ScoringModel() = default;

  virtual const Vocab& vocab() const = 0;

  // Writes the next-token distribution into `out`, which must have
  // vocab().size() entries. `prefix` starts with <BOS>.
  virtual void NextDistribution(std::span<const TokenId> source,
                                std::span<const TokenId> prefix,
                                std::span<double> out) const = 0;

  std::vector<double> NextDistribution(std::span<const TokenId> source,
                                       std::span<const TokenId> prefix) const {
    std::vector<double> out(vocab().size());
    NextDistribution(source, prefix, out);
    return out;
  }
};

// Sum of log p(tokens[i] | source, tokens[0..i)) for i >= 1.
double SequenceLogProb(const ScoringModel& model,
                       std::span<const TokenId> source,
                       std::span<const TokenId> tokens);

struct LmConfig {
  int order = 3;
  double lambda_copy = 0.3;
  // Interpolation weights for orders 1..order. Empty selects weights
  // proportional to 1, 2, 4, ... scaled to 1 - lambda_copy.
  std::vector<double> ngram_weights;
  double alpha = 0.1;
  int slot_capacity = Vocab::kDefaultSlotCapacity;

  // Fills defaulted weights and validates: order >= 2, lambda_copy in
  // [0, 1), weights >= 0 summing with lambda_copy to 1, alpha >= 0.
  // Throws std::invalid_argument.
  LmConfig Resolved() const;
};

// Exact n-gram counts for orders 1..order over framed target sequences.
class NgramCounts {
 public:
  using Table = std::map<std::vector<TokenId>, std::uint64_t>;

  explicit NgramCounts(int order = 3);

  int order() const { return static_cast<int>(tables_.size()); }

  // ngram.size() must be in [1, order].
  void Add(std::span<const TokenId> ngram, std::uint64_t count = 1);

  // Counts the m-grams ending at every position i >= 1 of `framed`, for each
  // m <= order. Positions before the start read as `pad`.
  void AddSequence(std::span<const TokenId> framed, TokenId pad);

  std::uint64_t Get(std::span<const TokenId> ngram) const;
  const Table& table(int n) const { return tables_.at(n - 1); }

  bool operator==(const NgramCounts&) const = default;

 private:
  std::vector<Table> tables_;
};

// Copy-augmented interpolated n-gram model:
//
//   p(w) = sum_m lambda_m * (c(h_m, w) + alpha) / (c(h_m) + alpha * |V|)
//          + lambda_copy * (occurrences of w in source) / |source|
//
// where h_m is the last m-1 prefix tokens (left-padded with <BOS>). With an
// empty source the copy weight is redistributed proportionally over the
// n-gram terms. Immutable after construction; safe to share across threads.
class CondNgramModel final : public ScoringModel {
 public:
  CondNgramModel(Vocab vocab, NgramCounts counts, const LmConfig& config);

  // Counts output_tokens of every example; the vocabulary covers all input
  // and output tokens plus the reserved surfaces. Output sequences must be
  // framed by <BOS>/<EOS>. Throws EmptyCorpus.
  static CondNgramModel Fit(std::span<const ExamplePair> examples,
                            const LmConfig& config);

  const Vocab& vocab() const override { return vocab_; }
  void NextDistribution(std::span<const TokenId> source,
                        std::span<const TokenId> prefix,
                        std::span<double> out) const override;
  using ScoringModel::NextDistribution;

  const NgramCounts& counts() const { return counts_; }
  const LmConfig& config() const { return config_; }

  // Binary format, little-endian:
  //   "ATLM" u32:version u32:order f64:lambda_copy f64[order]:weights
  //   f64:alpha u32:|V| {u32:len bytes}*|V|
  //   for m in 1..order: u64:entries {u32[m]:ids u64:count}*entries
  void Write(std::ostream& out) const;
  static CondNgramModel Read(std::istream& in);
  void Save(const std::string& path) const;
  static CondNgramModel Load(const std::string& path);

  static constexpr std::uint32_t kFormatVersion = 1;

 private:
  struct History {
    std::uint64_t total = 0;
    std::vector<std::pair<TokenId, std::uint64_t>> next;
  };

  void Index();

  Vocab vocab_;
  NgramCounts counts_;
  LmConfig config_;
  // histories_[m-1]: packed (m-1)-token history -> continuation counts.
  std::vector<std::unordered_map<std::string, History>> histories_;
};

}  // namespace atk

#endif  // ATK_LM_H_
