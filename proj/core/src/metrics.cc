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

#include "atk/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "atk/errors.h"

namespace atk {
namespace {

void CheckAligned(std::size_t hyps, std::size_t refs) {
  if (hyps != refs) {
    throw std::invalid_argument("hypothesis and reference counts differ");
  }
  if (hyps == 0) throw EmptyCorpus("no hypotheses to score");
}

std::string NgramKey(std::span<const Token> tokens) {
  std::string key;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) key.push_back('\x1f');
    key += tokens[i];
  }
  return key;
}

std::size_t NgramTotal(std::size_t len, std::size_t n) {
  return len >= n ? len - n + 1 : 0;
}

std::size_t ClippedOverlap(const NgramCountMap& hyp, const NgramCountMap& ref) {
  std::size_t overlap = 0;
  for (const auto& [g, c] : hyp) {
    if (auto it = ref.find(g); it != ref.end()) overlap += std::min(c, it->second);
  }
  return overlap;
}

double F1(double precision, double recall) {
  return precision + recall > 0.0
             ? 2.0 * precision * recall / (precision + recall)
             : 0.0;
}

// Sum after sorting so the result does not depend on pair order.
double StableMean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double RougeN(std::span<const Token> hyp, std::span<const Token> ref,
              std::size_t n) {
  const std::size_t h = NgramTotal(hyp.size(), n);
  const std::size_t r = NgramTotal(ref.size(), n);
  if (h == 0 || r == 0) return 0.0;
  const auto overlap =
      static_cast<double>(ClippedOverlap(CountNgrams(hyp, n), CountNgrams(ref, n)));
  return F1(overlap / static_cast<double>(h), overlap / static_cast<double>(r));
}

}  // namespace

NgramCountMap CountNgrams(std::span<const Token> tokens, std::size_t n) {
  NgramCountMap counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[NgramKey(tokens.subspan(i, n))];
  }
  return counts;
}

double Bleu(std::span<const Tokens> hypotheses,
            std::span<const Tokens> references, int n) {
  CheckAligned(hypotheses.size(), references.size());
  if (n < 1) throw std::invalid_argument("BLEU order must be >= 1");
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    hyp_len += hypotheses[i].size();
    ref_len += references[i].size();
  }
  if (hyp_len == 0) return 0.0;
  double log_precision = 0.0;
  for (int m = 1; m <= n; ++m) {
    const auto order = static_cast<std::size_t>(m);
    std::size_t matches = 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
      matches += ClippedOverlap(CountNgrams(hypotheses[i], order),
                                CountNgrams(references[i], order));
      total += NgramTotal(hypotheses[i].size(), order);
    }
    if (matches == 0 || total == 0) return 0.0;
    log_precision += std::log(static_cast<double>(matches) / static_cast<double>(total));
  }
  const double bp = std::exp(std::min(
      0.0, 1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len)));
  return bp * std::exp(log_precision / n);
}

double NistBrevityFactor(double sys_len, double ref_len) {
  if (sys_len <= 0.0 || ref_len <= 0.0) return 0.0;
  const double beta = std::log(0.5) / std::pow(std::log(2.0 / 3.0), 2);
  const double ratio = std::min(sys_len / ref_len, 1.0);
  return std::exp(beta * std::pow(std::log(ratio), 2));
}

double Nist(std::span<const Tokens> hypotheses,
            std::span<const Tokens> references, int n) {
  CheckAligned(hypotheses.size(), references.size());
  if (n < 1) throw std::invalid_argument("NIST order must be >= 1");
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    hyp_len += hypotheses[i].size();
    ref_len += references[i].size();
  }
  if (hyp_len == 0 || ref_len == 0) return 0.0;

  // Reference-corpus counts for orders 1..n.
  std::vector<NgramCountMap> ref_counts(static_cast<std::size_t>(n) + 1);
  for (const auto& ref : references) {
    for (std::size_t m = 1; m <= static_cast<std::size_t>(n); ++m) {
      for (auto& [g, c] : CountNgrams(ref, m)) ref_counts[m][g] += c;
    }
  }

  double score = 0.0;
  for (std::size_t m = 1; m <= static_cast<std::size_t>(n); ++m) {
    std::map<std::string, std::size_t> matched;
    std::size_t hyp_total = 0;
    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
      const auto hc = CountNgrams(hypotheses[i], m);
      const auto rc = CountNgrams(references[i], m);
      for (const auto& [g, c] : hc) {
        if (auto it = rc.find(g); it != rc.end()) {
          matched[g] += std::min(c, it->second);
        }
      }
      hyp_total += NgramTotal(hypotheses[i].size(), m);
    }
    if (hyp_total == 0) continue;
    double info_sum = 0.0;
    for (const auto& [g, c] : matched) {
      double prefix_count;
      if (m == 1) {
        prefix_count = static_cast<double>(ref_len);
      } else {
        const auto cut = g.rfind('\x1f');
        prefix_count = static_cast<double>(ref_counts[m - 1].at(g.substr(0, cut)));
      }
      const double count = static_cast<double>(ref_counts[m].at(g));
      info_sum += static_cast<double>(c) * std::log2(prefix_count / count);
    }
    score += info_sum / static_cast<double>(hyp_total);
  }
  return score * NistBrevityFactor(static_cast<double>(hyp_len),
                                   static_cast<double>(ref_len));
}

std::size_t LcsLength(std::span<const Token> a, std::span<const Token> b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

RougeScores Rouge(std::span<const Tokens> hypotheses,
                  std::span<const Tokens> references) {
  CheckAligned(hypotheses.size(), references.size());
  std::vector<double> r1, r2, rl;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    const auto& h = hypotheses[i];
    const auto& r = references[i];
    r1.push_back(RougeN(h, r, 1));
    r2.push_back(RougeN(h, r, 2));
    if (h.empty() || r.empty()) {
      rl.push_back(0.0);
    } else {
      const auto lcs = static_cast<double>(LcsLength(h, r));
      rl.push_back(F1(lcs / static_cast<double>(h.size()),
                      lcs / static_cast<double>(r.size())));
    }
  }
  return {StableMean(std::move(r1)), StableMean(std::move(r2)),
          StableMean(std::move(rl))};
}

bool SatisfiesConstraints(std::span<const Token> output,
                          const ConstraintSet& constraints) {
  if (constraints.empty()) return true;
  try {
    FindConstraintSpans(output, constraints);
    return true;
  } catch (const ConstraintNotFound&) {
    return false;
  }
}

SuccessReport SuccessRate(std::span<const Tokens> outputs,
                          std::span<const ConstraintSet> constraint_sets) {
  if (outputs.size() != constraint_sets.size()) {
    throw std::invalid_argument("output and constraint counts differ");
  }
  SuccessReport report;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const bool ok = SatisfiesConstraints(outputs[i], constraint_sets[i]);
    auto& bucket = report.by_constraint_count[constraint_sets[i].size()];
    ++bucket.total;
    ++report.total;
    if (ok) {
      ++bucket.successes;
      ++report.successes;
    }
  }
  if (report.total) {
    report.rate = 100.0 * static_cast<double>(report.successes) /
                  static_cast<double>(report.total);
  }
  return report;
}

EvalReport Evaluate(std::span<const Tokens> hypotheses,
                    std::span<const Tokens> references,
                    std::span<const ConstraintSet> constraint_sets) {
  EvalReport r;
  r.count = hypotheses.size();
  r.bleu2 = Bleu(hypotheses, references, 2);
  r.bleu4 = Bleu(hypotheses, references, 4);
  r.nist2 = Nist(hypotheses, references, 2);
  r.nist4 = Nist(hypotheses, references, 4);
  const auto rouge = Rouge(hypotheses, references);
  r.rouge1_f = rouge.rouge1_f;
  r.rouge2_f = rouge.rouge2_f;
  r.rougeL_f = rouge.rougeL_f;
  r.success = SuccessRate(hypotheses, constraint_sets);
  return r;
}

nlohmann::json EvalReport::ToJson() const {
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& [k, b] : success.by_constraint_count) {
    curve.push_back({{"constraints", k},
                     {"successes", b.successes},
                     {"total", b.total},
                     {"rate", b.rate()}});
  }
  return {{"system", system},
          {"mode", mode},
          {"count", count},
          {"bleu2", bleu2},
          {"bleu4", bleu4},
          {"nist2", nist2},
          {"nist4", nist4},
          {"rouge1_f", rouge1_f},
          {"rouge2_f", rouge2_f},
          {"rougeL_f", rougeL_f},
          {"success_rate", success.rate},
          {"successes", success.successes},
          {"repairs", repairs},
          {"success_curve", curve}};
}

std::string RenderTable(std::span<const EvalReport> reports) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-14s %6s %6s %6s %6s %6s %6s %6s %6s\n",
                "system", "B2", "B4", "N2", "N4", "R1", "R2", "RL", "SR");
  out += line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof(line),
                  "%-14s %6.2f %6.2f %6.2f %6.2f %6.2f %6.2f %6.2f %6.1f\n",
                  r.system.empty() ? "-" : r.system.c_str(), 100 * r.bleu2,
                  100 * r.bleu4, r.nist2, r.nist4, 100 * r.rouge1_f,
                  100 * r.rouge2_f, 100 * r.rougeL_f, r.success.rate);
    out += line;
  }
  return out;
}

std::string RenderSuccessCurve(std::span<const EvalReport> reports) {
  std::map<std::size_t, bool> keys;
  for (const auto& r : reports) {
    for (const auto& [k, b] : r.success.by_constraint_count) keys[k] = true;
  }
  std::string out;
  char cell[64];
  std::snprintf(cell, sizeof(cell), "%-14s", "SR by |Z|");
  out += cell;
  for (const auto& [k, unused] : keys) {
    std::snprintf(cell, sizeof(cell), " %6zu", k);
    out += cell;
  }
  out += '\n';
  for (const auto& r : reports) {
    std::snprintf(cell, sizeof(cell), "%-14s", r.system.c_str());
    out += cell;
    for (const auto& [k, unused] : keys) {
      auto it = r.success.by_constraint_count.find(k);
      if (it == r.success.by_constraint_count.end()) {
        std::snprintf(cell, sizeof(cell), " %6s", "-");
      } else {
        std::snprintf(cell, sizeof(cell), " %6.1f", it->second.rate());
      }
      out += cell;
    }
    out += '\n';
  }
  return out;
}

}  // namespace atk
