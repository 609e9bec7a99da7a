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

#include "atk/vocab.h"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace atk {

Vocab::Vocab(std::vector<std::string> surfaces) : surfaces_(std::move(surfaces)) {
  for (std::size_t i = 0; i < surfaces_.size(); ++i) {
    auto [it, inserted] =
        index_.emplace(surfaces_[i], static_cast<TokenId>(i));
    if (!inserted) {
      throw std::invalid_argument("duplicate vocabulary entry '" +
                                  surfaces_[i] + "'");
    }
  }
  auto bos = Find(kBos);
  auto eos = Find(kEos);
  if (!bos || !eos) {
    throw std::invalid_argument("vocabulary lacks <BOS> or <EOS>");
  }
  bos_ = *bos;
  eos_ = *eos;
  unk_ = Find(kUnk);
}

Vocab Vocab::WithReserved(std::span<const std::string> observed,
                          int slot_capacity) {
  std::vector<std::string> surfaces = {
      std::string(kUnk),        std::string(kBos),
      std::string(kEos),        std::string(kSingleMask),
      std::string(kTldrMarker), std::string(kSeparator)};
  for (int k = 1; k <= slot_capacity; ++k) surfaces.push_back(SlotSurface(k));
  std::set<std::string> reserved(surfaces.begin(), surfaces.end());
  std::set<std::string> rest;
  for (const auto& s : observed) {
    if (!reserved.contains(s)) rest.insert(s);
  }
  surfaces.insert(surfaces.end(), rest.begin(), rest.end());
  return Vocab(std::move(surfaces));
}

std::optional<TokenId> Vocab::Find(std::string_view surface) const {
  auto it = index_.find(surface);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocab::Id(std::string_view surface) const {
  if (auto id = Find(surface)) return *id;
  if (unk_) return *unk_;
  throw std::out_of_range("token '" + std::string(surface) +
                          "' not in vocabulary");
}

std::vector<TokenId> Vocab::Encode(std::span<const Token> tokens) const {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(Id(t));
  return ids;
}

Tokens Vocab::Decode(std::span<const TokenId> ids) const {
  Tokens out;
  out.reserve(ids.size());
  for (TokenId id : ids) out.push_back(Surface(id));
  return out;
}

}  // namespace atk
