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

#include "atk/lm.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "atk/errors.h"

namespace atk {
namespace {

constexpr char kMagic[4] = {'A', 'T', 'L', 'M'};

void PutU32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void PutU64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

void PutF64(std::ostream& out, double v) {
  PutU64(out, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t GetLE(std::istream& in, int bytes) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), bytes)) {
    throw Error("truncated model file");
  }
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint32_t GetU32(std::istream& in) {
  return static_cast<std::uint32_t>(GetLE(in, 4));
}
std::uint64_t GetU64(std::istream& in) { return GetLE(in, 8); }
double GetF64(std::istream& in) { return std::bit_cast<double>(GetU64(in)); }

std::string PackKey(std::span<const TokenId> ids) {
  std::string key(ids.size() * sizeof(TokenId), '\0');
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t b = 0; b < sizeof(TokenId); ++b) {
      key[i * sizeof(TokenId) + b] = static_cast<char>((ids[i] >> (8 * b)) & 0xff);
    }
  }
  return key;
}

}  // namespace

double SequenceLogProb(const ScoringModel& model,
                       std::span<const TokenId> source,
                       std::span<const TokenId> tokens) {
  std::vector<double> dist(model.vocab().size());
  double total = 0.0;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    model.NextDistribution(source, tokens.first(i), dist);
    total += std::log(dist[tokens[i]]);
  }
  return total;
}

LmConfig LmConfig::Resolved() const {
  LmConfig c = *this;
  if (c.order < 2) throw std::invalid_argument("model order must be >= 2");
  if (!(c.lambda_copy >= 0.0 && c.lambda_copy < 1.0)) {
    throw std::invalid_argument("lambda_copy must be in [0, 1)");
  }
  if (!(c.alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (c.slot_capacity < 0) {
    throw std::invalid_argument("slot capacity must be >= 0");
  }
  if (c.ngram_weights.empty()) {
    double norm = 0.0;
    for (int m = 0; m < c.order; ++m) norm += std::ldexp(1.0, m);
    for (int m = 0; m < c.order; ++m) {
      c.ngram_weights.push_back((1.0 - c.lambda_copy) * std::ldexp(1.0, m) / norm);
    }
  }
  if (static_cast<int>(c.ngram_weights.size()) != c.order) {
    throw std::invalid_argument("need one interpolation weight per order");
  }
  double sum = c.lambda_copy;
  for (double w : c.ngram_weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("weights and lambda_copy must sum to 1");
  }
  return c;
}

NgramCounts::NgramCounts(int order) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  tables_.resize(static_cast<std::size_t>(order));
}

void NgramCounts::Add(std::span<const TokenId> ngram, std::uint64_t count) {
  if (ngram.empty() || ngram.size() > tables_.size()) {
    throw std::invalid_argument("n-gram length out of range");
  }
  if (count == 0) return;
  tables_[ngram.size() - 1][std::vector<TokenId>(ngram.begin(), ngram.end())] +=
      count;
}

void NgramCounts::AddSequence(std::span<const TokenId> framed, TokenId pad) {
  const std::size_t pad_len = tables_.size() - 1;
  std::vector<TokenId> padded(pad_len, pad);
  padded.insert(padded.end(), framed.begin(), framed.end());
  for (std::size_t i = pad_len + 1; i < padded.size(); ++i) {
    for (std::size_t m = 1; m <= tables_.size(); ++m) {
      Add(std::span<const TokenId>(padded).subspan(i + 1 - m, m));
    }
  }
}

std::uint64_t NgramCounts::Get(std::span<const TokenId> ngram) const {
  if (ngram.empty() || ngram.size() > tables_.size()) return 0;
  const auto& t = tables_[ngram.size() - 1];
  auto it = t.find(std::vector<TokenId>(ngram.begin(), ngram.end()));
  return it == t.end() ? 0 : it->second;
}

CondNgramModel::CondNgramModel(Vocab vocab, NgramCounts counts,
                               const LmConfig& config)
    : vocab_(std::move(vocab)),
      counts_(std::move(counts)),
      config_(config.Resolved()) {
  if (counts_.order() != config_.order) {
    throw std::invalid_argument("count tables do not match model order");
  }
  for (int m = 1; m <= counts_.order(); ++m) {
    for (const auto& [ngram, c] : counts_.table(m)) {
      for (TokenId id : ngram) {
        if (id >= vocab_.size()) {
          throw std::invalid_argument("n-gram id outside vocabulary");
        }
      }
    }
  }
  Index();
}

void CondNgramModel::Index() {
  histories_.assign(static_cast<std::size_t>(counts_.order()), {});
  for (int m = 1; m <= counts_.order(); ++m) {
    auto& map = histories_[m - 1];
    for (const auto& [ngram, c] : counts_.table(m)) {
      auto& h = map[PackKey(std::span<const TokenId>(ngram).first(m - 1))];
      h.total += c;
      h.next.emplace_back(ngram.back(), c);
    }
  }
}

CondNgramModel CondNgramModel::Fit(std::span<const ExamplePair> examples,
                                   const LmConfig& config) {
  if (examples.empty()) throw EmptyCorpus("no training examples");
  const LmConfig resolved = config.Resolved();
  std::set<std::string> observed;
  for (const auto& ex : examples) {
    const auto& out = ex.output_tokens;
    if (out.size() < 2 || out.front() != kBos || out.back() != kEos) {
      throw std::invalid_argument("training output must be framed by <BOS> ... <EOS>");
    }
    observed.insert(ex.input_tokens.begin(), ex.input_tokens.end());
    observed.insert(out.begin(), out.end());
  }
  std::vector<std::string> surfaces(observed.begin(), observed.end());
  Vocab vocab = Vocab::WithReserved(surfaces, resolved.slot_capacity);
  NgramCounts counts(resolved.order);
  for (const auto& ex : examples) {
    counts.AddSequence(vocab.Encode(ex.output_tokens), vocab.bos());
  }
  return CondNgramModel(std::move(vocab), std::move(counts), resolved);
}

void CondNgramModel::NextDistribution(std::span<const TokenId> source,
                                      std::span<const TokenId> prefix,
                                      std::span<double> out) const {
  const std::size_t v = vocab_.size();
  if (out.size() != v) throw std::invalid_argument("output size != |V|");
  std::fill(out.begin(), out.end(), 0.0);
  const bool copy = !source.empty() && config_.lambda_copy > 0.0;
  const double scale = copy ? 1.0 : 1.0 / (1.0 - config_.lambda_copy);
  const double alpha_v = config_.alpha * static_cast<double>(v);

  std::vector<TokenId> history;
  double base = 0.0;
  for (int m = 1; m <= config_.order; ++m) {
    const double w = config_.ngram_weights[m - 1] * scale;
    if (w == 0.0) continue;
    const std::size_t need = static_cast<std::size_t>(m - 1);
    history.assign(need, vocab_.bos());
    const std::size_t have = std::min(need, prefix.size());
    std::copy(prefix.end() - static_cast<std::ptrdiff_t>(have), prefix.end(),
              history.end() - static_cast<std::ptrdiff_t>(have));
    const auto& map = histories_[m - 1];
    auto it = map.find(PackKey(history));
    const History* h = it == map.end() ? nullptr : &it->second;
    const double denom = (h ? static_cast<double>(h->total) : 0.0) + alpha_v;
    if (denom <= 0.0) {
      base += w / static_cast<double>(v);
      continue;
    }
    base += w * config_.alpha / denom;
    if (h) {
      for (const auto& [id, c] : h->next) {
        out[id] += w * static_cast<double>(c) / denom;
      }
    }
  }
  for (auto& p : out) p += base;
  if (copy) {
    const double per = config_.lambda_copy / static_cast<double>(source.size());
    for (TokenId id : source) out[id] += per;
  }
}

void CondNgramModel::Write(std::ostream& out) const {
  out.write(kMagic, 4);
  PutU32(out, kFormatVersion);
  PutU32(out, static_cast<std::uint32_t>(config_.order));
  PutF64(out, config_.lambda_copy);
  for (double w : config_.ngram_weights) PutF64(out, w);
  PutF64(out, config_.alpha);
  PutU32(out, static_cast<std::uint32_t>(vocab_.size()));
  for (const auto& s : vocab_.surfaces()) {
    PutU32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  for (int m = 1; m <= counts_.order(); ++m) {
    const auto& table = counts_.table(m);
    PutU64(out, table.size());
    for (const auto& [ngram, c] : table) {
      for (TokenId id : ngram) PutU32(out, id);
      PutU64(out, c);
    }
  }
}

CondNgramModel CondNgramModel::Read(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
    throw Error("not a model file (bad magic)");
  }
  const auto version = GetU32(in);
  if (version != kFormatVersion) {
    throw Error("unsupported model format version " + std::to_string(version));
  }
  LmConfig config;
  config.order = static_cast<int>(GetU32(in));
  if (config.order < 2 || config.order > 64) throw Error("corrupt model order");
  config.lambda_copy = GetF64(in);
  config.ngram_weights.resize(static_cast<std::size_t>(config.order));
  for (auto& w : config.ngram_weights) w = GetF64(in);
  config.alpha = GetF64(in);
  const auto vsize = GetU32(in);
  std::vector<std::string> surfaces;
  surfaces.reserve(vsize);
  for (std::uint32_t i = 0; i < vsize; ++i) {
    const auto len = GetU32(in);
    std::string s(len, '\0');
    if (len && !in.read(s.data(), len)) throw Error("truncated model file");
    surfaces.push_back(std::move(s));
  }
  NgramCounts counts(config.order);
  std::vector<TokenId> ngram;
  for (int m = 1; m <= config.order; ++m) {
    const auto entries = GetU64(in);
    for (std::uint64_t e = 0; e < entries; ++e) {
      ngram.resize(static_cast<std::size_t>(m));
      for (auto& id : ngram) id = GetU32(in);
      counts.Add(ngram, GetU64(in));
    }
  }
  try {
    return CondNgramModel(Vocab(std::move(surfaces)), std::move(counts), config);
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("corrupt model file: ") + e.what());
  }
}

void CondNgramModel::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  Write(out);
  if (!out) throw Error("write failed: " + path);
}

CondNgramModel CondNgramModel::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return Read(in);
}

}  // namespace atk
