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

#include "atk/tokens.h"

#include <cctype>

namespace atk {
namespace {

bool IsAlnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }
bool IsDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }
bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

// Bytes >= 0x80 belong to UTF-8 sequences and are treated as word characters.
bool IsWordByte(char c) {
  return IsAlnum(c) || static_cast<unsigned char>(c) >= 0x80;
}

void SplitChunk(std::string_view chunk, Tokens& out) {
  if (IsReservedToken(chunk)) {
    out.emplace_back(chunk);
    return;
  }
  std::string word;
  auto flush = [&] {
    if (!word.empty()) {
      out.push_back(std::move(word));
      word.clear();
    }
  };
  for (size_t i = 0; i < chunk.size(); ++i) {
    const char c = chunk[i];
    if (IsWordByte(c)) {
      word.push_back(c);
      continue;
    }
    const bool next_is_word = i + 1 < chunk.size() && IsWordByte(chunk[i + 1]);
    // Clitics split off with their apostrophe: "Japan's" -> "Japan" "'s".
    if (c == '\'' && next_is_word) {
      flush();
      word.push_back(c);
      continue;
    }
    if (c == '-' && next_is_word && !word.empty()) {
      word.push_back(c);
      continue;
    }
    if ((c == '.' || c == ',') && !word.empty() && IsDigit(word.back()) &&
        i + 1 < chunk.size() && IsDigit(chunk[i + 1])) {
      word.push_back(c);
      continue;
    }
    flush();
    out.emplace_back(1, c);
  }
  flush();
}

}  // namespace

std::string SlotSurface(int k) { return "<P" + std::to_string(k) + ">"; }

std::optional<int> ParseSlotSurface(std::string_view token) {
  if (token.size() < 4 || token.substr(0, 2) != "<P" || token.back() != '>') {
    return std::nullopt;
  }
  const std::string_view digits = token.substr(2, token.size() - 3);
  if (digits.empty() || digits.size() > 9 || digits[0] == '0') {
    return std::nullopt;
  }
  int k = 0;
  for (char c : digits) {
    if (!IsDigit(c)) return std::nullopt;
    k = k * 10 + (c - '0');
  }
  return k;
}

bool IsReservedToken(std::string_view token) {
  return token == kTldrMarker || token == kSeparator || token == kBos ||
         token == kEos || token == kSingleMask ||
         ParseSlotSurface(token).has_value();
}

bool IsPunctuationToken(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (IsWordByte(c)) return false;
  }
  return true;
}

Tokens Tokenize(std::string_view text) {
  Tokens out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    size_t j = i;
    while (j < text.size() && !IsSpace(text[j])) ++j;
    if (j > i) SplitChunk(text.substr(i, j - i), out);
    i = j;
  }
  return out;
}

std::string JoinTokens(std::span<const Token> tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace atk
