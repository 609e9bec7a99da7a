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

#include "atk/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <variant>

#include "atk/errors.h"
#include "atk/parallel.h"

namespace atk {

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

StopwordSet LoadStopwords(const std::string& path) {
  StopwordSet words;
  for (auto& line : ReadLines(path)) {
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t");
    words.insert(line.substr(b, e - b + 1));
  }
  return words;
}

namespace {

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<std::size_t> EligibleKeywordPositions(
    std::span<const Token> target, const StopwordSet& stopwords) {
  std::unordered_map<std::string_view, int> freq;
  for (const auto& t : target) ++freq[t];
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const auto& t = target[i];
    if (freq[t] != 1 || IsPunctuationToken(t) || IsReservedToken(t)) continue;
    if (stopwords.contains(Lowercase(t))) continue;
    out.push_back(i);
  }
  return out;
}

ConstraintSet SampleKeywords(std::span<const Token> target, std::size_t k,
                             Rng& rng, const StopwordSet& stopwords) {
  auto pos = EligibleKeywordPositions(target, stopwords);
  if (pos.size() < k) throw NotEnoughEligible(k, pos.size());
  // Partial Fisher-Yates: the first k slots become a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = rng.Uniform(i, pos.size() - 1);
    std::swap(pos[i], pos[j]);
  }
  std::sort(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(k));
  ConstraintSet out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(Tokens{target[pos[i]]});
  return out;
}

Gazetteer::Gazetteer(std::vector<Tokens> entries) {
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  for (auto& e : entries) {
    Lexicon checked(e);  // validates
    by_first_[e.front()].push_back(std::move(e));
    ++size_;
  }
  for (auto& [first, list] : by_first_) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Tokens& a, const Tokens& b) {
                       return a.size() > b.size();
                     });
  }
}

Gazetteer Gazetteer::Load(const std::string& path) {
  std::vector<Tokens> entries;
  for (const auto& line : ReadLines(path)) {
    auto toks = Tokenize(line);
    if (!toks.empty() && toks.front().front() != '#') {
      entries.push_back(std::move(toks));
    }
  }
  return Gazetteer(std::move(entries));
}

ConstraintSet Gazetteer::Extract(std::span<const Token> target) const {
  ConstraintSet out;
  std::size_t i = 0;
  while (i < target.size()) {
    std::size_t advance = 1;
    if (auto it = by_first_.find(target[i]); it != by_first_.end()) {
      for (const auto& entry : it->second) {
        if (i + entry.size() <= target.size() &&
            std::equal(entry.begin(), entry.end(), target.begin() + i)) {
          out.emplace_back(entry);
          advance = entry.size();
          break;
        }
      }
    }
    i += advance;
  }
  return out;
}

nlohmann::json DatasetStats::ToJson() const {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [k, v] : constraint_histogram) hist[std::to_string(k)] = v;
  return {{"example_count", example_count},
          {"skipped", skipped},
          {"mean_output_len", mean_output_len},
          {"constraint_histogram", hist}};
}

BuildResult BuildDataset(std::span<const RawRecord> records,
                         const ConstraintSource& constraint_source,
                         const PlaceholderScheme& scheme, int workers) {
  if (const auto* cfg = std::get_if<SamplingConfig>(&constraint_source)) {
    if (cfg->min_k < 1 || cfg->max_k < cfg->min_k) {
      throw std::invalid_argument("sampling range must satisfy 1 <= min_k <= max_k");
    }
  }
  using Outcome = std::variant<BuiltExample, std::string>;
  std::vector<Outcome> outcomes(records.size());

  ParallelFor(records.size(), workers, [&](std::size_t i) {
    const RawRecord& rec = records[i];
    ConstraintSet constraints;
    try {
      if (rec.constraints) {
        constraints = *rec.constraints;
      } else if (const auto* cfg =
                     std::get_if<SamplingConfig>(&constraint_source)) {
        Rng rng(MixSeed(cfg->seed, i));
        const auto k = rng.Uniform(static_cast<std::uint64_t>(cfg->min_k),
                                   static_cast<std::uint64_t>(cfg->max_k));
        constraints = SampleKeywords(rec.target, k, rng, cfg->stopwords);
      } else {
        constraints = std::get<Gazetteer>(constraint_source).Extract(rec.target);
      }
      BuiltExample ex;
      ex.id = rec.id ? *rec.id : std::to_string(i);
      ex.source = rec.source;
      ex.pair = MakeExamplePair(rec.source ? std::span<const Token>(*rec.source)
                                           : std::span<const Token>(),
                                rec.target, constraints, scheme);
      outcomes[i] = std::move(ex);
    } catch (const NotEnoughEligible& e) {
      outcomes[i] = std::string(e.what());
    } catch (const ConstraintNotFound& e) {
      outcomes[i] = std::string(e.what());
    }
  });

  BuildResult result;
  std::size_t total_len = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (auto* ex = std::get_if<BuiltExample>(&outcomes[i])) {
      total_len += ex->pair.raw_target.size();
      ++result.stats.constraint_histogram[ex->pair.constraints.size()];
      result.examples.push_back(std::move(*ex));
    } else {
      result.skipped.push_back({i, std::get<std::string>(outcomes[i])});
    }
  }
  result.stats.example_count = result.examples.size();
  result.stats.skipped = result.skipped.size();
  if (!result.examples.empty()) {
    result.stats.mean_output_len = static_cast<double>(total_len) /
                                   static_cast<double>(result.examples.size());
  }
  return result;
}

}  // namespace atk
