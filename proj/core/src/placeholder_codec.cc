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

#include "atk/placeholder_codec.h"

#include <algorithm>
#include <functional>

namespace atk {

Lexicon::Lexicon(Tokens tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw InvalidLexicon("empty constraint lexicon");
  for (const auto& t : tokens_) {
    if (t.empty() || IsReservedToken(t)) {
      throw InvalidLexicon("constraint contains reserved token '" + t + "'");
    }
  }
}

Lexicon Lexicon::FromText(std::string_view text) {
  return Lexicon(Tokenize(text));
}

ConstraintSet ConstraintsFromTexts(std::span<const std::string> texts) {
  ConstraintSet out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(Lexicon::FromText(t));
  return out;
}

std::vector<std::string> ConstraintTexts(const ConstraintSet& constraints) {
  std::vector<std::string> out;
  out.reserve(constraints.size());
  for (const auto& c : constraints) out.push_back(c.text());
  return out;
}

std::size_t TotalConstraintTokens(const ConstraintSet& constraints) {
  std::size_t n = 0;
  for (const auto& c : constraints) n += c.size();
  return n;
}

std::string PlaceholderScheme::Surface(int k) const {
  return unique() ? SlotSurface(k) : std::string(kSingleMask);
}

bool PlaceholderScheme::IsSlot(std::string_view token) const {
  return unique() ? ParseSlotSurface(token).has_value() : token == kSingleMask;
}

std::string_view PlaceholderScheme::name() const {
  return unique() ? "unique" : "single-mask";
}

bool IsWellFormed(const Template& tmpl) {
  const auto& t = tmpl.tokens;
  if (t.size() < 2 || t.front() != kBos || t.back() != kEos) return false;
  std::size_t slots = 0;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] == kBos || t[i] == kEos) return false;
    if (tmpl.scheme.unique()) {
      if (t[i] == kSingleMask) return false;
      if (auto k = ParseSlotSurface(t[i])) {
        if (static_cast<std::size_t>(*k) != slots + 1) return false;
        ++slots;
      }
    } else {
      if (ParseSlotSurface(t[i])) return false;
      if (t[i] == kSingleMask) ++slots;
    }
  }
  return slots == tmpl.slot_count;
}

namespace {

std::vector<std::size_t> Occurrences(std::span<const Token> target,
                                     const Tokens& needle) {
  std::vector<std::size_t> starts;
  if (needle.size() > target.size()) return starts;
  for (std::size_t s = 0; s + needle.size() <= target.size(); ++s) {
    if (std::equal(needle.begin(), needle.end(), target.begin() + s)) {
      starts.push_back(s);
    }
  }
  return starts;
}

}  // namespace

std::vector<ConstraintSpan> FindConstraintSpans(
    std::span<const Token> target, const ConstraintSet& constraints) {
  const std::size_t n = constraints.size();
  std::vector<std::vector<std::size_t>> occ(n);
  for (std::size_t i = 0; i < n; ++i) {
    occ[i] = Occurrences(target, constraints[i].tokens());
    if (occ[i].empty()) throw ConstraintNotFound(i);
  }
  // Identical constraints are interchangeable; forcing their starts to be
  // increasing prunes symmetric branches without changing the lex-min answer.
  std::vector<std::optional<std::size_t>> twin(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j-- > 0;) {
      if (constraints[j] == constraints[i]) {
        twin[i] = j;
        break;
      }
    }
  }

  std::vector<bool> used(target.size(), false);
  std::vector<std::size_t> start(n, 0);
  std::size_t deepest = 0;
  std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
    deepest = std::max(deepest, i);
    if (i == n) return true;
    const std::size_t len = constraints[i].size();
    for (std::size_t s : occ[i]) {
      if (twin[i] && s <= start[*twin[i]]) continue;
      bool free = true;
      for (std::size_t p = s; p < s + len; ++p) {
        if (used[p]) {
          free = false;
          break;
        }
      }
      if (!free) continue;
      for (std::size_t p = s; p < s + len; ++p) used[p] = true;
      start[i] = s;
      if (place(i + 1)) return true;
      for (std::size_t p = s; p < s + len; ++p) used[p] = false;
    }
    return false;
  };
  if (!place(0)) throw ConstraintNotFound(deepest);

  std::vector<ConstraintSpan> spans;
  spans.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    spans.push_back({i, start[i], start[i] + constraints[i].size()});
  }
  std::sort(spans.begin(), spans.end(),
            [](const ConstraintSpan& a, const ConstraintSpan& b) {
              return a.start < b.start;
            });
  return spans;
}

ConstraintSet OrderByAppearance(std::span<const Token> target,
                                const ConstraintSet& constraints) {
  ConstraintSet ordered;
  ordered.reserve(constraints.size());
  for (const auto& span : FindConstraintSpans(target, constraints)) {
    ordered.push_back(constraints[span.constraint]);
  }
  return ordered;
}

Template EncodeTemplate(std::span<const Token> target,
                        const ConstraintSet& constraints,
                        const PlaceholderScheme& scheme) {
  Template tmpl;
  tmpl.scheme = scheme;
  tmpl.slot_count = constraints.size();
  tmpl.tokens.emplace_back(kBos);
  const auto spans = FindConstraintSpans(target, constraints);
  std::size_t next = 0;
  for (std::size_t i = 0; i < target.size();) {
    if (next < spans.size() && spans[next].start == i) {
      tmpl.tokens.push_back(scheme.Surface(static_cast<int>(next) + 1));
      i = spans[next].end;
      ++next;
    } else {
      tmpl.tokens.push_back(target[i]);
      ++i;
    }
  }
  tmpl.tokens.emplace_back(kEos);
  return tmpl;
}

Tokens EncodeInput(std::span<const Token> source,
                   const ConstraintSet& constraints,
                   const PlaceholderScheme& scheme) {
  Tokens out;
  out.reserve(2 + constraints.size() + TotalConstraintTokens(constraints) +
              source.size());
  out.emplace_back(kTldrMarker);
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    out.push_back(scheme.Surface(static_cast<int>(k) + 1));
    const auto& toks = constraints[k].tokens();
    out.insert(out.end(), toks.begin(), toks.end());
  }
  out.emplace_back(kSeparator);
  out.insert(out.end(), source.begin(), source.end());
  return out;
}

Tokens Lexicalize(const Template& tmpl, const ConstraintSet& constraints) {
  const std::size_t n = constraints.size();
  if (tmpl.slot_count != n) {
    throw SlotMismatch("template has " + std::to_string(tmpl.slot_count) +
                       " slots but " + std::to_string(n) +
                       " constraints were given");
  }
  Tokens out;
  std::vector<bool> seen(n, false);
  std::size_t filled = 0;
  auto emit = [&](std::size_t k) {
    const auto& toks = constraints[k].tokens();
    out.insert(out.end(), toks.begin(), toks.end());
  };
  for (const auto& t : tmpl.tokens) {
    if (t == kBos || t == kEos) continue;
    if (tmpl.scheme.unique()) {
      if (t == kSingleMask) throw SlotMismatch("unexpected <M> in template");
      if (auto k = ParseSlotSurface(t)) {
        const auto idx = static_cast<std::size_t>(*k);
        if (idx > n) throw SlotMismatch("unknown placeholder " + t);
        if (seen[idx - 1]) throw SlotMismatch("duplicate placeholder " + t);
        seen[idx - 1] = true;
        ++filled;
        emit(idx - 1);
        continue;
      }
    } else {
      if (ParseSlotSurface(t)) throw SlotMismatch("unexpected " + t);
      if (t == kSingleMask) {
        if (filled == n) throw SlotMismatch("more <M> slots than constraints");
        emit(filled++);
        continue;
      }
    }
    out.push_back(t);
  }
  if (filled != n) {
    throw SlotMismatch("template fills " + std::to_string(filled) + " of " +
                       std::to_string(n) + " slots");
  }
  return out;
}

RepairResult RepairTemplate(std::span<const Token> tokens,
                            std::size_t slot_count,
                            const PlaceholderScheme& scheme) {
  Tokens body;
  body.reserve(tokens.size() + slot_count);
  if (scheme.unique()) {
    std::vector<bool> seen(slot_count, false);
    for (const auto& t : tokens) {
      if (t == kBos || t == kEos || t == kSingleMask) continue;
      if (auto k = ParseSlotSurface(t)) {
        const auto idx = static_cast<std::size_t>(*k);
        if (idx > slot_count || seen[idx - 1]) continue;
        seen[idx - 1] = true;
      }
      body.push_back(t);
    }
    for (std::size_t k = 0; k < slot_count; ++k) {
      if (!seen[k]) body.push_back(SlotSurface(static_cast<int>(k) + 1));
    }
    int next = 1;
    for (auto& t : body) {
      if (ParseSlotSurface(t)) t = SlotSurface(next++);
    }
  } else {
    std::size_t count = 0;
    for (const auto& t : tokens) {
      if (t == kBos || t == kEos || ParseSlotSurface(t)) continue;
      if (t == kSingleMask) {
        if (count == slot_count) continue;
        ++count;
      }
      body.push_back(t);
    }
    for (; count < slot_count; ++count) body.emplace_back(kSingleMask);
  }

  RepairResult result;
  result.tmpl.scheme = scheme;
  result.tmpl.slot_count = slot_count;
  result.tmpl.tokens.reserve(body.size() + 2);
  result.tmpl.tokens.emplace_back(kBos);
  result.tmpl.tokens.insert(result.tmpl.tokens.end(), body.begin(), body.end());
  result.tmpl.tokens.emplace_back(kEos);
  result.repaired = !std::equal(tokens.begin(), tokens.end(),
                                result.tmpl.tokens.begin(),
                                result.tmpl.tokens.end());
  return result;
}

ExamplePair MakeExamplePair(std::span<const Token> source,
                            std::span<const Token> target,
                            const ConstraintSet& constraints,
                            const PlaceholderScheme& scheme) {
  ExamplePair pair;
  pair.constraints = OrderByAppearance(target, constraints);
  pair.output_tokens = EncodeTemplate(target, pair.constraints, scheme).tokens;
  pair.input_tokens = EncodeInput(source, pair.constraints, scheme);
  pair.raw_target.assign(target.begin(), target.end());
  return pair;
}

ExamplePair ToTextPair(const ExamplePair& pair) {
  ExamplePair out = pair;
  out.output_tokens.clear();
  out.output_tokens.reserve(pair.raw_target.size() + 2);
  out.output_tokens.emplace_back(kBos);
  out.output_tokens.insert(out.output_tokens.end(), pair.raw_target.begin(),
                           pair.raw_target.end());
  out.output_tokens.emplace_back(kEos);
  return out;
}

}  // namespace atk
