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

#ifndef ATK_TESTS_ORACLES_LM_ORACLE_H_
#define ATK_TESTS_ORACLES_LM_ORACLE_H_

// Recomputes the interpolated add-alpha + copy distribution by rescanning
// the raw training outputs for every query. Slow; test use only.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "atk/placeholder_codec.h"
#include "atk/tokens.h"

namespace atk::oracle {

class CountingLm {
 public:
  CountingLm(std::vector<Tokens> outputs, int order, double lambda_copy,
             double alpha, std::vector<std::string> vocab)
      : outputs_(std::move(outputs)),
        order_(order),
        lambda_copy_(lambda_copy),
        alpha_(alpha),
        vocab_(std::move(vocab)) {}

  // p(w | source, prefix) for every vocab surface, in vocab order. Unknown
  // surfaces in source/prefix must already be mapped to <unk> by the caller.
  std::vector<double> Distribution(const Tokens& source, const Tokens& prefix) const {
    double pow_sum = 0.0;
    for (int m = 0; m < order_; ++m) pow_sum += std::pow(2.0, m);
    const double ngram_mass = source.empty() ? 1.0 : 1.0 - lambda_copy_;
    std::vector<double> p(vocab_.size(), 0.0);
    for (int m = 1; m <= order_; ++m) {
      const double lambda = ngram_mass * std::pow(2.0, m - 1) / pow_sum;
      Tokens padded(order_ - 1, std::string(kBos));
      padded.insert(padded.end(), prefix.begin(), prefix.end());
      const Tokens history(padded.end() - (m - 1), padded.end());
      const auto following = CountFollowing(history);
      double h = 0;
      for (const auto& [w, c] : following) h += static_cast<double>(c);
      const double denom = h + alpha_ * static_cast<double>(vocab_.size());
      for (std::size_t w = 0; w < vocab_.size(); ++w) {
        auto it = following.find(vocab_[w]);
        const double hw = it == following.end() ? 0.0 : static_cast<double>(it->second);
        p[w] += lambda * (denom > 0 ? (hw + alpha_) / denom
                                    : 1.0 / static_cast<double>(vocab_.size()));
      }
    }
    if (!source.empty()) {
      for (std::size_t w = 0; w < vocab_.size(); ++w) {
        double c = 0;
        for (const auto& s : source) c += s == vocab_[w] ? 1 : 0;
        p[w] += lambda_copy_ * c / static_cast<double>(source.size());
      }
    }
    return p;
  }

 private:
  // Tokens at predicted positions (index >= 1 of each framed output) whose
  // preceding tokens, <BOS>-padded, end with `history`.
  std::map<std::string, std::size_t> CountFollowing(const Tokens& history) const {
    std::map<std::string, std::size_t> c;
    for (const auto& out : outputs_) {
      Tokens padded(order_ - 1, std::string(kBos));
      padded.insert(padded.end(), out.begin(), out.end());
      for (std::size_t i = order_; i < padded.size(); ++i) {
        bool eq = true;
        for (std::size_t j = 0; j < history.size() && eq; ++j) {
          eq = padded[i - history.size() + j] == history[j];
        }
        if (eq) ++c[padded[i]];
      }
    }
    return c;
  }

  std::vector<Tokens> outputs_;
  int order_;
  double lambda_copy_;
  double alpha_;
  std::vector<std::string> vocab_;
};

}  // namespace atk::oracle

#endif  // ATK_TESTS_ORACLES_LM_ORACLE_H_
