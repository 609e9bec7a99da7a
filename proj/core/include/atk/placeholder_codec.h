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

#ifndef ATK_PLACEHOLDER_CODEC_H_
#define ATK_PLACEHOLDER_CODEC_H_

// Template encoding and lexicalization.
//
// A target sentence y and an ordered constraint set Z become a template in
// which every constraint span is masked by a placeholder, framed by <BOS> and
// <EOS>. The model input is "TL;DR: <P1> z1 <P2> z2 ... | source". After
// decoding, Lexicalize() substitutes the constraints back into the slots, so
// every constraint is present in the final text by construction.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "atk/errors.h"
#include "atk/tokens.h"

namespace atk {

// One constraint lexicon: a non-empty token sequence without reserved tokens.
class Lexicon {
 public:
  // Throws InvalidLexicon on empty input or reserved tokens.
  explicit Lexicon(Tokens tokens);
  static Lexicon FromText(std::string_view text);

  const Tokens& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  std::string text() const { return JoinTokens(tokens_); }

  bool operator==(const Lexicon&) const = default;

 private:
  Tokens tokens_;
};

// Order is significant: constraint k (1-based) pairs with slot <Pk>.
using ConstraintSet = std::vector<Lexicon>;

ConstraintSet ConstraintsFromTexts(std::span<const std::string> texts);
std::vector<std::string> ConstraintTexts(const ConstraintSet& constraints);
std::size_t TotalConstraintTokens(const ConstraintSet& constraints);

enum class PlaceholderMode {
  kUnique,      // <P1>, <P2>, ... one surface per slot
  kSingleMask,  // every slot is <M>
};

class PlaceholderScheme {
 public:
  constexpr PlaceholderScheme() = default;
  constexpr explicit PlaceholderScheme(PlaceholderMode mode) : mode_(mode) {}

  static constexpr PlaceholderScheme Unique() {
    return PlaceholderScheme(PlaceholderMode::kUnique);
  }
  static constexpr PlaceholderScheme SingleMask() {
    return PlaceholderScheme(PlaceholderMode::kSingleMask);
  }

  PlaceholderMode mode() const { return mode_; }
  bool unique() const { return mode_ == PlaceholderMode::kUnique; }

  // Surface of the k-th slot, k >= 1.
  std::string Surface(int k) const;
  std::string_view bos() const { return kBos; }
  std::string_view eos() const { return kEos; }

  // True when the token is a slot placeholder under this scheme.
  bool IsSlot(std::string_view token) const;

  // "unique" or "single-mask"; used in reports.
  std::string_view name() const;

  bool operator==(const PlaceholderScheme&) const = default;

 private:
  PlaceholderMode mode_ = PlaceholderMode::kUnique;
};

struct Template {
  Tokens tokens;
  std::size_t slot_count = 0;
  PlaceholderScheme scheme;

  bool operator==(const Template&) const = default;
};

// Checks the structural invariants: framed by <BOS>/<EOS> with no interior
// sentinels, slots consistent with slot_count (unique mode: each of 1..n
// exactly once in increasing order of appearance; single-mask mode: exactly
// n <M> tokens), and no placeholder foreign to the scheme.
bool IsWellFormed(const Template& tmpl);

struct ConstraintSpan {
  std::size_t constraint = 0;  // index into the ConstraintSet
  std::size_t start = 0;       // token offset, inclusive
  std::size_t end = 0;         // token offset, exclusive

  bool operator==(const ConstraintSpan&) const = default;
};

// One non-overlapping span per constraint, sorted by start. Among all valid
// assignments returns the one with the lexicographically smallest tuple of
// starts taken in constraint-list order. Throws ConstraintNotFound carrying
// the first constraint index that could not be placed.
std::vector<ConstraintSpan> FindConstraintSpans(std::span<const Token> target,
                                                const ConstraintSet& constraints);

// Permutes the constraints into the order their spans appear in the target.
// EncodeTemplate numbers slots by appearance, so Lexicalize() reproduces the
// target exactly when given the constraints in this order.
ConstraintSet OrderByAppearance(std::span<const Token> target,
                                const ConstraintSet& constraints);

Template EncodeTemplate(std::span<const Token> target,
                        const ConstraintSet& constraints,
                        const PlaceholderScheme& scheme);

// TL;DR: <P1> z1 ... <Pn> zn | source
Tokens EncodeInput(std::span<const Token> source,
                   const ConstraintSet& constraints,
                   const PlaceholderScheme& scheme);

// Replaces slot k (unique) or the k-th <M> (single mask) with constraint k
// and strips <BOS>/<EOS>. Throws SlotMismatch.
Tokens Lexicalize(const Template& tmpl, const ConstraintSet& constraints);

struct RepairResult {
  Template tmpl;
  bool repaired = false;
};

// Coerces raw decoder output into a well-formed template: interior sentinels
// and foreign placeholders are dropped, duplicate or out-of-range slots
// removed, missing slots appended before <EOS> in ascending order, and
// finally slots renumbered by order of appearance. Idempotent.
RepairResult RepairTemplate(std::span<const Token> tokens,
                            std::size_t slot_count,
                            const PlaceholderScheme& scheme);

// A training/evaluation pair. constraints are stored in appearance order.
struct ExamplePair {
  Tokens input_tokens;
  Tokens output_tokens;
  ConstraintSet constraints;
  Tokens raw_target;
};

// Orders the constraints by appearance and encodes both sides.
// Propagates ConstraintNotFound.
ExamplePair MakeExamplePair(std::span<const Token> source,
                            std::span<const Token> target,
                            const ConstraintSet& constraints,
                            const PlaceholderScheme& scheme);

// Same input, but the output is the framed raw target instead of the
// template. Used to fit direct-text baselines.
ExamplePair ToTextPair(const ExamplePair& pair);

}  // namespace atk

#endif  // ATK_PLACEHOLDER_CODEC_H_
