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

#ifndef ATK_DECODE_H_
#define ATK_DECODE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "atk/lm.h"
#include "atk/placeholder_codec.h"
#include "atk/vocab.h"

namespace atk {

struct BeamConfig {
  int beam_size = 5;
  // Maximum hypothesis length in tokens, counting <BOS> and <EOS>. A
  // hypothesis reaching max_len - 1 tokens can only be extended with <EOS>.
  int max_len = 64;
  // Final ranking uses score / (generated tokens)^length_penalty.
  double length_penalty = 1.0;

  // Throws std::invalid_argument unless beam_size >= 1, max_len >= 2 and
  // length_penalty >= 0.
  void Validate() const;
};

struct Hypothesis {
  std::vector<TokenId> tokens;  // tokens[0] is <BOS>
  double score = 0.0;           // sum of log-probabilities
  bool finished = false;        // ends with <EOS>
  bool truncated = false;       // <EOS> was forced by max_len

  double NormalizedScore(double length_penalty) const;
};

// Ranking order shared by the decoders: higher normalized score first, ties
// broken by lexicographically smaller token-id sequence.
bool RanksBefore(const Hypothesis& a, const Hypothesis& b,
                 double length_penalty);

// Left-to-right beam search from <BOS>. Each step keeps the beam_size best
// extensions by accumulated score (ties: lexicographic token ids); extensions
// ending in <EOS> move to the finished list and the search stops once it holds
// beam_size hypotheses. <BOS> is never generated. Returns up to beam_size
// finished hypotheses in RanksBefore order.
std::vector<Hypothesis> BeamSearch(const ScoringModel& model,
                                   std::span<const TokenId> source,
                                   const BeamConfig& config);

struct GbsResult {
  std::vector<Hypothesis> hypotheses;  // from the highest finished bank
  std::size_t bank = 0;                // constraint tokens covered
  std::size_t total_constraint_tokens = 0;
  bool satisfied = false;              // bank == total_constraint_tokens
};

// Grid beam search. States are partitioned into banks by the number of
// constraint tokens consumed; each bank keeps beam_size states per step.
// A state either generates freely (bank unchanged), starts an unmet
// constraint, or continues its open constraint (bank + 1). A constraint once
// started must be completed before anything else, including <EOS>. With no
// constraints this is token-identical to BeamSearch().
GbsResult GridBeamSearch(const ScoringModel& model,
                         std::span<const TokenId> source,
                         std::span<const std::vector<TokenId>> constraints,
                         const BeamConfig& config);

// Zeroes the probability of the given tokens and renormalizes. Used to stop
// the text-level baselines from emitting template placeholders.
class TokenSuppressingModel final : public ScoringModel {
 public:
  TokenSuppressingModel(const ScoringModel& base,
                        std::span<const TokenId> suppressed);

  const Vocab& vocab() const override { return base_.vocab(); }
  void NextDistribution(std::span<const TokenId> source,
                        std::span<const TokenId> prefix,
                        std::span<double> out) const override;
  using ScoringModel::NextDistribution;

 private:
  const ScoringModel& base_;
  std::vector<bool> suppressed_;
};

// Ids of every slot placeholder (<Pk> and <M>) present in the vocabulary.
std::vector<TokenId> PlaceholderIds(const Vocab& vocab);

// Tokens that can never appear in a template: the input markers and the
// placeholders of the other scheme. Extra slots of this scheme stay allowed;
// repair deals with them.
std::vector<TokenId> ForbiddenTemplateIds(const Vocab& vocab,
                                          const PlaceholderScheme& scheme);

// Tokens masked for the direct-text baselines: all placeholders and the
// input markers.
std::vector<TokenId> ForbiddenTextIds(const Vocab& vocab);

struct GenerationDiagnostics {
  std::size_t rank_used = 0;
  bool repaired = false;
  double score = 0.0;
  std::optional<std::size_t> bank_reached;

  nlohmann::json ToJson() const;
};

struct Generation {
  Tokens text;
  GenerationDiagnostics diagnostics;
};

// Template pipeline: encode the input, beam-search templates, take the best
// well-formed one (else repair the top hypothesis), then lexicalize. The
// output contains every constraint for any model.
Generation AutoTemplateGenerate(const ScoringModel& model,
                                std::span<const Token> source,
                                const ConstraintSet& constraints,
                                const PlaceholderScheme& scheme,
                                const BeamConfig& config);

enum class System { kBeam, kGbs, kAutoTemplate };

std::optional<System> ParseSystem(std::string_view name);
std::string_view SystemName(System system);

// kBeam and kGbs decode text directly: the same constraint-prefixed input as
// the template pipeline, with placeholders suppressed. kGbs additionally
// forces the constraint tokens through GridBeamSearch().
Generation Generate(System system, const ScoringModel& model,
                    std::span<const Token> source,
                    const ConstraintSet& constraints,
                    const PlaceholderScheme& scheme, const BeamConfig& config);

}  // namespace atk

#endif  // ATK_DECODE_H_
