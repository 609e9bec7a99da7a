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

// JSONL readers and writers for raw records and built examples.

#include <fstream>

#include "atk/corpus.h"
#include "atk/errors.h"

namespace atk {
namespace {

using nlohmann::json;

json ParseObject(std::string_view line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(line_no, "record is not a JSON object");
  return j;
}

std::optional<std::string> ParseId(const json& j, std::size_t line_no) {
  auto it = j.find("id");
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw ParseError(line_no, "\"id\" must be a string or integer");
}

std::optional<Tokens> ParseOptionalText(const json& j, const char* key,
                                        std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw ParseError(line_no, std::string("\"") + key + "\" must be a string");
  }
  return Tokenize(it->get<std::string>());
}

Tokens ParseRequiredText(const json& j, const char* key, std::size_t line_no) {
  auto toks = ParseOptionalText(j, key, line_no);
  if (!toks) {
    throw ParseError(line_no, std::string("missing \"") + key + "\"");
  }
  return std::move(*toks);
}

std::optional<ConstraintSet> ParseConstraints(const json& j,
                                              std::size_t line_no) {
  auto it = j.find("constraints");
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) {
    throw ParseError(line_no, "\"constraints\" must be an array of strings");
  }
  ConstraintSet out;
  for (const auto& c : *it) {
    if (!c.is_string()) {
      throw ParseError(line_no, "\"constraints\" must be an array of strings");
    }
    try {
      out.push_back(Lexicon::FromText(c.get<std::string>()));
    } catch (const InvalidLexicon& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

template <typename Fn>
void ForEachLine(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    fn(line, line_no);
  }
}

void WriteLines(const std::string& path, const std::vector<json>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  for (const auto& r : rows) out << r.dump() << '\n';
  if (!out) throw Error("write failed: " + path);
}

}  // namespace

RawRecord ParseRecord(std::string_view line, std::size_t line_no,
                      const JsonlOptions& options) {
  const json j = ParseObject(line, line_no);
  RawRecord rec;
  rec.id = ParseId(j, line_no);
  rec.source = ParseOptionalText(j, "source", line_no);
  if (options.require_target) {
    rec.target = ParseRequiredText(j, "target", line_no);
    if (rec.target.empty()) throw ParseError(line_no, "empty \"target\"");
  } else if (auto t = ParseOptionalText(j, "target", line_no)) {
    rec.target = std::move(*t);
  }
  rec.constraints = ParseConstraints(j, line_no);
  return rec;
}

json RecordToJson(const RawRecord& record) {
  json j;
  if (record.id) j["id"] = *record.id;
  j["source"] = record.source ? json(JoinTokens(*record.source)) : json(nullptr);
  j["target"] = JoinTokens(record.target);
  if (record.constraints) j["constraints"] = ConstraintTexts(*record.constraints);
  return j;
}

std::vector<RawRecord> ReadJsonl(const std::string& path,
                                 const JsonlOptions& options) {
  std::vector<RawRecord> out;
  ForEachLine(path, [&](const std::string& line, std::size_t line_no) {
    out.push_back(ParseRecord(line, line_no, options));
  });
  return out;
}

void WriteJsonl(const std::string& path, std::span<const RawRecord> records) {
  std::vector<json> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(RecordToJson(r));
  WriteLines(path, rows);
}

json ExampleToJson(const BuiltExample& example) {
  const auto& p = example.pair;
  return {{"id", example.id},
          {"source", example.source ? json(JoinTokens(*example.source))
                                    : json(nullptr)},
          {"target", JoinTokens(p.raw_target)},
          {"constraints", ConstraintTexts(p.constraints)},
          {"input", JoinTokens(p.input_tokens)},
          {"output", JoinTokens(p.output_tokens)}};
}

BuiltExample ParseExample(std::string_view line, std::size_t line_no) {
  const json j = ParseObject(line, line_no);
  BuiltExample ex;
  ex.id = ParseId(j, line_no).value_or(std::to_string(line_no));
  ex.source = ParseOptionalText(j, "source", line_no);
  ex.pair.raw_target = ParseRequiredText(j, "target", line_no);
  ex.pair.constraints = ParseConstraints(j, line_no).value_or(ConstraintSet{});
  ex.pair.input_tokens = ParseRequiredText(j, "input", line_no);
  ex.pair.output_tokens = ParseRequiredText(j, "output", line_no);
  return ex;
}

std::vector<BuiltExample> ReadExamplesJsonl(const std::string& path) {
  std::vector<BuiltExample> out;
  ForEachLine(path, [&](const std::string& line, std::size_t line_no) {
    out.push_back(ParseExample(line, line_no));
  });
  return out;
}

void WriteExamplesJsonl(const std::string& path,
                        std::span<const BuiltExample> examples) {
  std::vector<json> rows;
  rows.reserve(examples.size());
  for (const auto& e : examples) rows.push_back(ExampleToJson(e));
  WriteLines(path, rows);
}

}  // namespace atk
