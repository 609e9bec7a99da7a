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

#include "atk/decode.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace atk {
namespace {

struct TopToken {
  TokenId id;
  double p;
};

bool Better(const TopToken& a, const TopToken& b) {
  return a.p > b.p || (a.p == b.p && a.id < b.id);
}

// The k most probable tokens with p > 0, excluding `skip`, best first.
void TopK(std::span<const double> dist, std::size_t k, TokenId skip,
          std::vector<TopToken>& out) {
  out.clear();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const TopToken t{static_cast<TokenId>(i), dist[i]};
    if (t.id == skip || !(t.p > 0.0)) continue;
    if (out.size() < k) {
      out.push_back(t);
      std::push_heap(out.begin(), out.end(), Better);
    } else if (Better(t, out.front())) {
      std::pop_heap(out.begin(), out.end(), Better);
      out.back() = t;
      std::push_heap(out.begin(), out.end(), Better);
    }
  }
  std::sort_heap(out.begin(), out.end(), Better);
}

// Lexicographic comparison of (prefix + a_next) vs (prefix' + b_next).
int CompareExtended(const std::vector<TokenId>& a, TokenId a_next,
                    const std::vector<TokenId>& b, TokenId b_next) {
  if (a != b) return a < b ? -1 : 1;
  if (a_next != b_next) return a_next < b_next ? -1 : 1;
  return 0;
}

std::vector<Hypothesis> Rank(std::vector<Hypothesis> hyps, std::size_t keep,
                             double length_penalty) {
  std::sort(hyps.begin(), hyps.end(),
            [&](const Hypothesis& a, const Hypothesis& b) {
              return RanksBefore(a, b, length_penalty);
            });
  hyps.erase(std::unique(hyps.begin(), hyps.end(),
                         [](const Hypothesis& a, const Hypothesis& b) {
                           return a.tokens == b.tokens;
                         }),
             hyps.end());
  if (hyps.size() > keep) hyps.resize(keep);
  return hyps;
}

struct GbsState {
  std::vector<TokenId> tokens;
  double score = 0.0;
  std::vector<std::uint8_t> done;  // per constraint
  int open = -1;                   // constraint being emitted
  std::size_t pos = 0;             // tokens of `open` already emitted
};

struct GbsCandidate {
  const GbsState* parent;
  TokenId token;
  double score;
  int started = -1;  // constraint started by this step
  bool continued = false;
};

// Total order used for pruning: score, then token sequence, then coverage.
bool CandidateBefore(const GbsCandidate& a, const GbsCandidate& b) {
  if (a.score != b.score) return a.score > b.score;
  const int c = CompareExtended(a.parent->tokens, a.token, b.parent->tokens,
                                b.token);
  if (c != 0) return c < 0;
  if (a.parent->done != b.parent->done) return a.parent->done < b.parent->done;
  if (a.parent->open != b.parent->open) return a.parent->open < b.parent->open;
  if (a.parent->pos != b.parent->pos) return a.parent->pos < b.parent->pos;
  if (a.started != b.started) return a.started < b.started;
  return a.continued < b.continued;
}

}  // namespace

void BeamConfig::Validate() const {
  if (beam_size < 1) throw std::invalid_argument("beam_size must be >= 1");
  if (max_len < 2) throw std::invalid_argument("max_len must be >= 2");
  if (!(length_penalty >= 0.0)) {
    throw std::invalid_argument("length_penalty must be >= 0");
  }
}

double Hypothesis::NormalizedScore(double length_penalty) const {
  const double len = tokens.size() > 1 ? static_cast<double>(tokens.size() - 1) : 1.0;
  return length_penalty == 0.0 ? score : score / std::pow(len, length_penalty);
}

bool RanksBefore(const Hypothesis& a, const Hypothesis& b,
                 double length_penalty) {
  const double sa = a.NormalizedScore(length_penalty);
  const double sb = b.NormalizedScore(length_penalty);
  if (sa != sb) return sa > sb;
  return a.tokens < b.tokens;
}

std::vector<Hypothesis> BeamSearch(const ScoringModel& model,
                                   std::span<const TokenId> source,
                                   const BeamConfig& config) {
  config.Validate();
  const Vocab& vocab = model.vocab();
  const auto beam = static_cast<std::size_t>(config.beam_size);
  const TokenId eos = vocab.eos();

  struct Candidate {
    std::size_t parent;
    TokenId token;
    double score;
  };

  std::vector<Hypothesis> live(1);
  live[0].tokens = {vocab.bos()};
  std::vector<Hypothesis> finished;
  std::vector<double> dist(vocab.size());
  std::vector<TopToken> top;
  std::vector<Candidate> cands;

  for (int len = 1; len < config.max_len && !live.empty(); ++len) {
    const bool last = len + 1 == config.max_len;
    cands.clear();
    for (std::size_t h = 0; h < live.size(); ++h) {
      model.NextDistribution(source, live[h].tokens, dist);
      if (last) {
        if (dist[eos] > 0.0) {
          cands.push_back({h, eos, live[h].score + std::log(dist[eos])});
        }
        continue;
      }
      TopK(dist, beam, vocab.bos(), top);
      for (const auto& t : top) {
        cands.push_back({h, t.id, live[h].score + std::log(t.p)});
      }
    }
    auto before = [&](const Candidate& a, const Candidate& b) {
      if (a.score != b.score) return a.score > b.score;
      return CompareExtended(live[a.parent].tokens, a.token,
                             live[b.parent].tokens, b.token) < 0;
    };
    const std::size_t keep = std::min(beam, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep),
                      cands.end(), before);

    std::vector<Hypothesis> next;
    next.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
      const auto& c = cands[i];
      Hypothesis h;
      h.tokens = live[c.parent].tokens;
      h.tokens.push_back(c.token);
      h.score = c.score;
      if (c.token == eos) {
        h.finished = true;
        h.truncated = last;
        finished.push_back(std::move(h));
      } else {
        next.push_back(std::move(h));
      }
    }
    live = std::move(next);
    if (finished.size() >= beam) break;
  }
  return Rank(std::move(finished), beam, config.length_penalty);
}

GbsResult GridBeamSearch(const ScoringModel& model,
                         std::span<const TokenId> source,
                         std::span<const std::vector<TokenId>> constraints,
                         const BeamConfig& config) {
  config.Validate();
  const Vocab& vocab = model.vocab();
  const auto beam = static_cast<std::size_t>(config.beam_size);
  const TokenId eos = vocab.eos();
  const std::size_t n = constraints.size();

  std::size_t total = 0;
  for (const auto& c : constraints) {
    if (c.empty()) throw std::invalid_argument("empty constraint");
    total += c.size();
  }
  // Among identical unmet constraints only the lowest index may start.
  std::vector<int> twin(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (constraints[j] == constraints[i]) {
        twin[i] = static_cast<int>(j);
        break;
      }
    }
  }

  std::vector<std::vector<GbsState>> live(total + 1);
  std::vector<std::vector<Hypothesis>> finished(total + 1);
  live[0].resize(1);
  live[0][0].tokens = {vocab.bos()};
  live[0][0].done.assign(n, 0);

  std::vector<double> dist(vocab.size());
  std::vector<TopToken> top;
  std::vector<std::vector<GbsCandidate>> cands(total + 1);

  for (int len = 1; len < config.max_len; ++len) {
    const bool last = len + 1 == config.max_len;
    for (auto& c : cands) c.clear();
    bool any_live = false;
    for (std::size_t bank = 0; bank <= total; ++bank) {
      for (const auto& s : live[bank]) {
        any_live = true;
        model.NextDistribution(source, s.tokens, dist);
        if (s.open >= 0) {
          if (last) continue;
          const TokenId t = constraints[static_cast<std::size_t>(s.open)][s.pos];
          if (dist[t] > 0.0) {
            cands[bank + 1].push_back(
                {&s, t, s.score + std::log(dist[t]), -1, true});
          }
          continue;
        }
        if (last) {
          if (dist[eos] > 0.0) {
            cands[bank].push_back({&s, eos, s.score + std::log(dist[eos])});
          }
          continue;
        }
        TopK(dist, beam, vocab.bos(), top);
        for (const auto& t : top) {
          cands[bank].push_back({&s, t.id, s.score + std::log(t.p)});
        }
        for (std::size_t i = 0; i < n; ++i) {
          if (s.done[i]) continue;
          if (twin[i] >= 0 && !s.done[static_cast<std::size_t>(twin[i])]) continue;
          const TokenId t = constraints[i][0];
          if (dist[t] > 0.0) {
            cands[bank + 1].push_back(
                {&s, t, s.score + std::log(dist[t]), static_cast<int>(i)});
          }
        }
      }
    }
    if (!any_live) break;

    std::vector<std::vector<GbsState>> next(total + 1);
    for (std::size_t bank = 0; bank <= total; ++bank) {
      auto& cb = cands[bank];
      const std::size_t keep = std::min(beam, cb.size());
      std::partial_sort(cb.begin(), cb.begin() + static_cast<std::ptrdiff_t>(keep),
                        cb.end(), CandidateBefore);
      for (std::size_t i = 0; i < keep; ++i) {
        const auto& c = cb[i];
        GbsState s = *c.parent;
        s.tokens.push_back(c.token);
        s.score = c.score;
        if (c.started >= 0) {
          s.open = c.started;
          s.pos = 1;
        } else if (c.continued) {
          ++s.pos;
        }
        if (s.open >= 0 &&
            s.pos == constraints[static_cast<std::size_t>(s.open)].size()) {
          s.done[static_cast<std::size_t>(s.open)] = 1;
          s.open = -1;
          s.pos = 0;
        }
        if (c.token == eos && c.started < 0 && !c.continued) {
          Hypothesis h;
          h.tokens = std::move(s.tokens);
          h.score = s.score;
          h.finished = true;
          h.truncated = last;
          finished[bank].push_back(std::move(h));
        } else {
          next[bank].push_back(std::move(s));
        }
      }
    }
    live = std::move(next);
    if (finished[total].size() >= beam) break;
  }

  GbsResult result;
  result.total_constraint_tokens = total;
  for (std::size_t bank = total + 1; bank-- > 0;) {
    if (!finished[bank].empty()) {
      result.bank = bank;
      result.hypotheses = Rank(std::move(finished[bank]), beam, config.length_penalty);
      break;
    }
  }
  result.satisfied = !result.hypotheses.empty() && result.bank == total;
  return result;
}

TokenSuppressingModel::TokenSuppressingModel(const ScoringModel& base,
                                             std::span<const TokenId> suppressed)
    : base_(base), suppressed_(base.vocab().size(), false) {
  for (TokenId id : suppressed) suppressed_.at(id) = true;
}

void TokenSuppressingModel::NextDistribution(std::span<const TokenId> source,
                                             std::span<const TokenId> prefix,
                                             std::span<double> out) const {
  base_.NextDistribution(source, prefix, out);
  double kept = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (suppressed_[i]) {
      out[i] = 0.0;
    } else {
      kept += out[i];
    }
  }
  if (kept > 0.0) {
    for (auto& p : out) p /= kept;
  }
}

std::vector<TokenId> PlaceholderIds(const Vocab& vocab) {
  std::vector<TokenId> ids;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto& s = vocab.Surface(static_cast<TokenId>(i));
    if (s == kSingleMask || ParseSlotSurface(s)) {
      ids.push_back(static_cast<TokenId>(i));
    }
  }
  return ids;
}

std::vector<TokenId> ForbiddenTemplateIds(const Vocab& vocab,
                                          const PlaceholderScheme& scheme) {
  std::vector<TokenId> ids;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto id = static_cast<TokenId>(i);
    const auto& s = vocab.Surface(id);
    const bool placeholder = s == kSingleMask || ParseSlotSurface(s);
    if (s == kTldrMarker || s == kSeparator ||
        (placeholder && !scheme.IsSlot(s))) {
      ids.push_back(id);
    }
  }
  return ids;
}

std::vector<TokenId> ForbiddenTextIds(const Vocab& vocab) {
  auto ids = PlaceholderIds(vocab);
  for (std::string_view marker : {kTldrMarker, kSeparator}) {
    if (auto id = vocab.Find(marker)) ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

nlohmann::json GenerationDiagnostics::ToJson() const {
  return {{"rank_used", rank_used},
          {"repaired", repaired},
          {"bank_reached",
           bank_reached ? nlohmann::json(*bank_reached) : nlohmann::json(nullptr)},
          {"score", score}};
}

Generation AutoTemplateGenerate(const ScoringModel& model,
                                std::span<const Token> source,
                                const ConstraintSet& constraints,
                                const PlaceholderScheme& scheme,
                                const BeamConfig& config) {
  const Vocab& vocab = model.vocab();
  const auto input = vocab.Encode(EncodeInput(source, constraints, scheme));
  const TokenSuppressingModel template_model(
      model, ForbiddenTemplateIds(vocab, scheme));
  const auto hyps = BeamSearch(template_model, input, config);

  Generation gen;
  std::optional<Template> chosen;
  for (std::size_t r = 0; r < hyps.size(); ++r) {
    Template t{vocab.Decode(hyps[r].tokens), constraints.size(), scheme};
    if (IsWellFormed(t)) {
      chosen = std::move(t);
      gen.diagnostics.rank_used = r;
      gen.diagnostics.score = hyps[r].score;
      break;
    }
  }
  if (!chosen) {
    const Tokens raw = hyps.empty() ? Tokens{} : vocab.Decode(hyps[0].tokens);
    auto repaired = RepairTemplate(raw, constraints.size(), scheme);
    chosen = std::move(repaired.tmpl);
    gen.diagnostics.repaired = repaired.repaired;
    gen.diagnostics.score = hyps.empty() ? 0.0 : hyps[0].score;
  }
  gen.text = Lexicalize(*chosen, constraints);
  return gen;
}

std::optional<System> ParseSystem(std::string_view name) {
  if (name == "beam") return System::kBeam;
  if (name == "gbs") return System::kGbs;
  if (name == "autotemplate") return System::kAutoTemplate;
  return std::nullopt;
}

std::string_view SystemName(System system) {
  switch (system) {
    case System::kBeam:
      return "beam";
    case System::kGbs:
      return "gbs";
    case System::kAutoTemplate:
      return "autotemplate";
  }
  return "unknown";
}

namespace {

Tokens StripSentinels(const Vocab& vocab, const std::vector<TokenId>& ids) {
  Tokens out;
  for (TokenId id : ids) {
    if (id == vocab.bos() || id == vocab.eos()) continue;
    out.push_back(vocab.Surface(id));
  }
  return out;
}

}  // namespace

Generation Generate(System system, const ScoringModel& model,
                    std::span<const Token> source,
                    const ConstraintSet& constraints,
                    const PlaceholderScheme& scheme, const BeamConfig& config) {
  if (system == System::kAutoTemplate) {
    return AutoTemplateGenerate(model, source, constraints, scheme, config);
  }
  const Vocab& vocab = model.vocab();
  const TokenSuppressingModel text_model(model, ForbiddenTextIds(vocab));
  const auto input = vocab.Encode(EncodeInput(source, constraints, scheme));

  Generation gen;
  std::vector<Hypothesis> hyps;
  if (system == System::kBeam) {
    hyps = BeamSearch(text_model, input, config);
  } else {
    std::vector<std::vector<TokenId>> ids;
    ids.reserve(constraints.size());
    for (const auto& c : constraints) ids.push_back(vocab.Encode(c.tokens()));
    auto result = GridBeamSearch(text_model, input, ids, config);
    gen.diagnostics.bank_reached = result.bank;
    hyps = std::move(result.hypotheses);
  }
  if (!hyps.empty()) {
    gen.text = StripSentinels(vocab, hyps[0].tokens);
    gen.diagnostics.score = hyps[0].score;
  }
  return gen;
}

}  // namespace atk
