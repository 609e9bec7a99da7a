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

#ifndef ATK_METRICS_H_
#define ATK_METRICS_H_

// Corpus-level n-gram metrics over word tokens, single reference per
// hypothesis, plus the constraint success rate.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "atk/placeholder_codec.h"
#include "atk/tokens.h"

namespace atk {

// n-gram -> count for one order. Keys are tokens joined by '\x1f'.
using NgramCountMap = std::unordered_map<std::string, std::size_t>;
NgramCountMap CountNgrams(std::span<const Token> tokens, std::size_t n);

// Geometric mean of clipped n-gram precisions for orders 1..n times
// exp(min(0, 1 - r/c)). Zero when any order has no match. No smoothing.
// Throws EmptyCorpus on empty input, std::invalid_argument on misaligned
// lists.
double Bleu(std::span<const Tokens> hypotheses,
            std::span<const Tokens> references, int n);

// NIST information-weighted n-gram score with the NIST brevity factor
// exp(beta * ln^2(min(Lsys / Lref, 1))), beta chosen so the factor is 0.5
// at a length ratio of 2/3.
double Nist(std::span<const Tokens> hypotheses,
            std::span<const Tokens> references, int n);
double NistBrevityFactor(double sys_len, double ref_len);

struct RougeScores {
  double rouge1_f = 0.0;
  double rouge2_f = 0.0;
  double rougeL_f = 0.0;
};

// Per-pair F1, macro-averaged over pairs.
RougeScores Rouge(std::span<const Tokens> hypotheses,
                  std::span<const Tokens> references);

std::size_t LcsLength(std::span<const Token> a, std::span<const Token> b);

// True when every constraint occupies its own contiguous span of the output;
// repeated constraints need as many disjoint occurrences.
bool SatisfiesConstraints(std::span<const Token> output,
                          const ConstraintSet& constraints);

struct SuccessBucket {
  std::size_t successes = 0;
  std::size_t total = 0;
  double rate() const {
    return total ? 100.0 * static_cast<double>(successes) /
                       static_cast<double>(total)
                 : 0.0;
  }
};

struct SuccessReport {
  double rate = 100.0;  // percent; 100 for an empty batch
  std::size_t successes = 0;
  std::size_t total = 0;
  std::map<std::size_t, SuccessBucket> by_constraint_count;
};

SuccessReport SuccessRate(std::span<const Tokens> outputs,
                          std::span<const ConstraintSet> constraint_sets);

struct EvalReport {
  std::string system;
  std::string mode;
  std::size_t count = 0;
  double bleu2 = 0.0;
  double bleu4 = 0.0;
  double nist2 = 0.0;
  double nist4 = 0.0;
  double rouge1_f = 0.0;
  double rouge2_f = 0.0;
  double rougeL_f = 0.0;
  SuccessReport success;
  std::size_t repairs = 0;  // templates that needed repair, if applicable

  nlohmann::json ToJson() const;
};

EvalReport Evaluate(std::span<const Tokens> hypotheses,
                    std::span<const Tokens> references,
                    std::span<const ConstraintSet> constraint_sets);

// Plain-text table with columns B2 B4 N2 N4 R1 R2 RL SR. BLEU and ROUGE are
// shown in percent, NIST raw, SR in percent.
std::string RenderTable(std::span<const EvalReport> reports);

// Success rate per constraint count, one row per system.
std::string RenderSuccessCurve(std::span<const EvalReport> reports);

}  // namespace atk

#endif  // ATK_METRICS_H_
