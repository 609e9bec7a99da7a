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

#ifndef ATK_TOKENS_H_
#define ATK_TOKENS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace atk {

using Token = std::string;
using Tokens = std::vector<Token>;

// Reserved surfaces. These are bit-exact parts of the text format.
inline constexpr std::string_view kTldrMarker = "TL;DR:";
inline constexpr std::string_view kSeparator = "|";
inline constexpr std::string_view kBos = "<BOS>";
inline constexpr std::string_view kEos = "<EOS>";
inline constexpr std::string_view kSingleMask = "<M>";
inline constexpr std::string_view kUnk = "<unk>";

// "<Pk>" for k >= 1.
std::string SlotSurface(int k);

// Inverse of SlotSurface. Rejects leading zeros and k < 1.
std::optional<int> ParseSlotSurface(std::string_view token);

// True for TL;DR:, |, <BOS>, <EOS>, <M> and every <Pk>.
bool IsReservedToken(std::string_view token);

// True when the token has no alphanumeric character at all.
bool IsPunctuationToken(std::string_view token);

// Splits on whitespace, then separates punctuation into standalone tokens.
// An apostrophe followed by a word character starts a clitic token
// ("Japan's" -> "Japan 's"); a hyphen inside a word stays attached
// ("well-known"), as do '.' and ',' between digits.
// Reserved surfaces are never split.
Tokens Tokenize(std::string_view text);

// Canonical text form: tokens joined by single spaces.
std::string JoinTokens(std::span<const Token> tokens);

}  // namespace atk

#endif  // ATK_TOKENS_H_
