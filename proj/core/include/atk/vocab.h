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

#ifndef ATK_VOCAB_H_
#define ATK_VOCAB_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "atk/tokens.h"

namespace atk {

using TokenId = std::uint32_t;

// Dense bijection between token surfaces and ids.
class Vocab {
 public:
  // Number of <Pk> surfaces always reserved by WithReserved().
  static constexpr int kDefaultSlotCapacity = 16;

  Vocab() = default;

  // Surfaces in id order. Must contain <BOS> and <EOS>; <unk> is optional.
  // Throws std::invalid_argument on duplicates or missing sentinels.
  explicit Vocab(std::vector<std::string> surfaces);

  // Model vocabulary: <unk>, <BOS>, <EOS>, <M>, TL;DR:, |, <P1>..<Pcap>,
  // then the remaining observed surfaces in sorted order. The result does not
  // depend on the order of `observed`.
  static Vocab WithReserved(std::span<const std::string> observed,
                            int slot_capacity = kDefaultSlotCapacity);

  std::size_t size() const { return surfaces_.size(); }
  std::optional<TokenId> Find(std::string_view surface) const;
  // Unknown surfaces map to <unk>; throws std::out_of_range if there is none.
  TokenId Id(std::string_view surface) const;
  const std::string& Surface(TokenId id) const { return surfaces_.at(id); }
  const std::vector<std::string>& surfaces() const { return surfaces_; }

  TokenId bos() const { return bos_; }
  TokenId eos() const { return eos_; }
  std::optional<TokenId> unk() const { return unk_; }

  std::vector<TokenId> Encode(std::span<const Token> tokens) const;
  Tokens Decode(std::span<const TokenId> ids) const;

  bool operator==(const Vocab& other) const {
    return surfaces_ == other.surfaces_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<std::string> surfaces_;
  std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> index_;
  TokenId bos_ = 0;
  TokenId eos_ = 0;
  std::optional<TokenId> unk_;
};

}  // namespace atk

#endif  // ATK_VOCAB_H_
