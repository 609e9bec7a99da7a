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
#ifndef ATK_BENCHMARKS_BENCH_DATA_H_
#define ATK_BENCHMARKS_BENCH_DATA_H_

#include <string>
#include <vector>

#include "atk/corpus.h"
#include "atk/lm.h"
#include "atk/placeholder_codec.h"

namespace atk::bench {

inline std::string DataPath(const std::string& rel) {
  return std::string(ATK_BENCH_DATA_DIR) + "/" + rel;
}

// Keyword examples built from the bundled training split, cached.
inline const std::vector<BuiltExample>& KeywordExamples() {
  static const std::vector<BuiltExample> examples = [] {
    SamplingConfig cfg;
    cfg.seed = 3;
    cfg.stopwords = LoadStopwords(DataPath("stopwords_en.txt"));
    const auto records = ReadJsonl(DataPath("toy/keywords_train.jsonl"));
    return BuildDataset(records, cfg, PlaceholderScheme::Unique(), 1).examples;
  }();
  return examples;
}

inline std::vector<ExamplePair> KeywordPairs(std::size_t limit) {
  std::vector<ExamplePair> out;
  for (const auto& e : KeywordExamples()) {
    if (out.size() == limit) break;
    out.push_back(e.pair);
  }
  return out;
}

inline const CondNgramModel& KeywordModel() {
  static const CondNgramModel model = CondNgramModel::Fit(KeywordPairs(SIZE_MAX), LmConfig{});
  return model;
}

}  // namespace atk::bench

#endif  // ATK_BENCHMARKS_BENCH_DATA_H_
