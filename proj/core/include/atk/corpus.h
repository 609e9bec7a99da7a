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

#ifndef ATK_CORPUS_H_
#define ATK_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "atk/placeholder_codec.h"
#include "atk/rng.h"
#include "atk/tokens.h"

namespace atk {

// One line of a raw corpus: an optional document, the reference text and,
// optionally, explicit constraints that bypass sampling/tagging.
struct RawRecord {
  std::optional<std::string> id;
  std::optional<Tokens> source;
  Tokens target;
  std::optional<ConstraintSet> constraints;

  bool operator==(const RawRecord&) const = default;
};

using StopwordSet = std::unordered_set<std::string>;

// One word per line; blank lines and lines starting with '#' are ignored.
StopwordSet LoadStopwords(const std::string& path);

struct SamplingConfig {
  int min_k = 1;
  int max_k = 6;
  std::uint64_t seed = 0;
  StopwordSet stopwords;
};

// Tokens that may serve as a sampled keyword: not a stopword (compared
// lowercased), not punctuation, not reserved, and occurring exactly once.
// Returned as positions into `target`, ascending.
std::vector<std::size_t> EligibleKeywordPositions(std::span<const Token> target,
                                                  const StopwordSet& stopwords);

// k distinct single-token lexicons in sentence order. Throws NotEnoughEligible.
ConstraintSet SampleKeywords(std::span<const Token> target, std::size_t k,
                             Rng& rng, const StopwordSet& stopwords);

// Dictionary entity tagger: longest match first, left to right,
// non-overlapping.
class Gazetteer {
 public:
  Gazetteer() = default;
  // Throws InvalidLexicon on empty entries.
  explicit Gazetteer(std::vector<Tokens> entries);
  // One entity surface per line, tokenized with Tokenize().
  static Gazetteer Load(const std::string& path);

  // Matches in appearance order; duplicates retained.
  ConstraintSet Extract(std::span<const Token> target) const;

  std::size_t size() const { return size_; }

 private:
  // First token -> candidate entries, longest first.
  std::unordered_map<std::string, std::vector<Tokens>> by_first_;
  std::size_t size_ = 0;
};

inline ConstraintSet ExtractEntities(std::span<const Token> target,
                                     const Gazetteer& gazetteer) {
  return gazetteer.Extract(target);
}

struct DatasetStats {
  std::size_t example_count = 0;
  std::size_t skipped = 0;
  double mean_output_len = 0.0;  // raw target tokens per example
  std::map<std::size_t, std::size_t> constraint_histogram;

  nlohmann::json ToJson() const;
};

// A built example together with the provenance needed downstream.
struct BuiltExample {
  std::string id;
  std::optional<Tokens> source;
  ExamplePair pair;
};

struct SkippedRecord {
  std::size_t index = 0;
  std::string reason;
};

struct BuildResult {
  std::vector<BuiltExample> examples;  // input order
  std::vector<SkippedRecord> skipped;
  DatasetStats stats;
};

using ConstraintSource = std::variant<SamplingConfig, Gazetteer>;

// For each record: take its explicit constraints, or sample keywords
// (k uniform in [min_k, max_k], seed mixed with the record index), or tag
// gazetteer entities; then encode. Records whose constraints cannot be
// derived or matched are skipped and counted. Output order equals input order
// for any worker count.
BuildResult BuildDataset(std::span<const RawRecord> records,
                         const ConstraintSource& constraint_source,
                         const PlaceholderScheme& scheme, int workers = 1);

// ---- JSONL ----------------------------------------------------------------
//
// Raw record: {"id": string?, "source": string|null, "target": string,
//              "constraints": [string, ...]?}
// Built example adds "input" and "output" (template) strings.

struct JsonlOptions {
  bool require_target = true;
};

RawRecord ParseRecord(std::string_view line, std::size_t line_no,
                      const JsonlOptions& options = {});
nlohmann::json RecordToJson(const RawRecord& record);

// Blank lines are skipped. Throws ParseError with the 1-based line number,
// or Error when the file cannot be opened.
std::vector<RawRecord> ReadJsonl(const std::string& path,
                                 const JsonlOptions& options = {});
void WriteJsonl(const std::string& path, std::span<const RawRecord> records);

nlohmann::json ExampleToJson(const BuiltExample& example);
BuiltExample ParseExample(std::string_view line, std::size_t line_no);
std::vector<BuiltExample> ReadExamplesJsonl(const std::string& path);
void WriteExamplesJsonl(const std::string& path,
                        std::span<const BuiltExample> examples);

// Reads all lines of a file; throws Error when it cannot be opened.
std::vector<std::string> ReadLines(const std::string& path);

}  // namespace atk

#endif  // ATK_CORPUS_H_
