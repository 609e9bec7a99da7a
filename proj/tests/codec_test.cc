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

#include "atk/placeholder_codec.h"

#include <algorithm>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "atk/rng.h"
#include "oracles/span_oracle.h"

namespace atk {
namespace {

ConstraintSet Z(std::initializer_list<const char*> texts) {
  ConstraintSet out;
  for (const char* t : texts) out.push_back(Lexicon::FromText(t));
  return out;
}

std::string Text(const Tokens& t) { return JoinTokens(t); }

TEST(LexiconTest, RejectsEmptyAndReserved) {
  EXPECT_THROW(Lexicon::FromText(""), InvalidLexicon);
  EXPECT_THROW(Lexicon::FromText("a <P1>"), InvalidLexicon);
  EXPECT_THROW(Lexicon::FromText("<EOS>"), InvalidLexicon);
  EXPECT_THROW(Lexicon::FromText("x | y"), InvalidLexicon);
  EXPECT_EQ(Lexicon::FromText("Manny Pacquiao").size(), 2u);
}

TEST(SchemeTest, Surfaces) {
  const auto u = PlaceholderScheme::Unique();
  EXPECT_EQ(u.Surface(1), "<P1>");
  EXPECT_EQ(u.Surface(12), "<P12>");
  EXPECT_TRUE(u.IsSlot("<P3>"));
  EXPECT_FALSE(u.IsSlot("<M>"));
  EXPECT_FALSE(u.IsSlot("<P0>"));
  const auto m = PlaceholderScheme::SingleMask();
  EXPECT_EQ(m.Surface(1), "<M>");
  EXPECT_EQ(m.Surface(7), "<M>");
  EXPECT_TRUE(m.IsSlot("<M>"));
  EXPECT_FALSE(m.IsSlot("<P1>"));
}

TEST(FindConstraintSpansTest, EmperorExample) {
  const auto spans = FindConstraintSpans(
      Tokenize("Japan 's Emperor Akihito offered sympathy"), Z({"Japan", "Akihito"}));
  const std::vector<ConstraintSpan> want = {{0, 0, 1}, {1, 3, 4}};
  EXPECT_EQ(spans, want);
}

TEST(FindConstraintSpansTest, LeftmostMatch) {
  const auto spans = FindConstraintSpans(Tokenize("a a b"), Z({"a"}));
  const std::vector<ConstraintSpan> want = {{0, 0, 1}};
  EXPECT_EQ(spans, want);
}

TEST(FindConstraintSpansTest, NoNonOverlappingCover) {
  EXPECT_THROW(FindConstraintSpans(Tokenize("x y x y"), Z({"x y", "y x"})),
               ConstraintNotFound);
}

TEST(FindConstraintSpansTest, BacktracksPastGreedyChoice) {
  // Greedy "a b" at 0 would block "b c"; the only cover puts "a b" at 3.
  const auto spans = FindConstraintSpans(Tokenize("a b c x a b"), Z({"a b", "b c"}));
  const std::vector<ConstraintSpan> want = {{1, 1, 3}, {0, 4, 6}};
  EXPECT_EQ(spans, want);
}

TEST(FindConstraintSpansTest, MissingConstraintIndex) {
  try {
    FindConstraintSpans(Tokenize("a b c"), Z({"a", "q"}));
    FAIL() << "expected ConstraintNotFound";
  } catch (const ConstraintNotFound& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

// Random small cases against exhaustive enumeration of assignments.
TEST(FindConstraintSpansTest, MatchesExhaustiveLexMin) {
  Rng rng(17);
  const char* alphabet[] = {"a", "b", "c"};
  for (int trial = 0; trial < 3000; ++trial) {
    Tokens text(rng.Uniform(1, 8));
    for (auto& t : text) t = alphabet[rng.Uniform(0, 2)];
    std::vector<Tokens> patterns(rng.Uniform(1, 3));
    ConstraintSet z;
    for (auto& p : patterns) {
      p.resize(rng.Uniform(1, 2));
      for (auto& t : p) t = alphabet[rng.Uniform(0, 2)];
      z.emplace_back(p);
    }
    const auto all = oracle::AllAssignments(text, patterns);
    if (all.empty()) {
      EXPECT_THROW(FindConstraintSpans(text, z), ConstraintNotFound);
      continue;
    }
    const auto spans = FindConstraintSpans(text, z);
    std::vector<std::size_t> starts(z.size());
    for (const auto& s : spans) starts[s.constraint] = s.start;
    ASSERT_EQ(starts, all.front()) << "trial " << trial << ": " << Text(text);
    for (std::size_t i = 1; i < spans.size(); ++i) {
      EXPECT_LE(spans[i - 1].end, spans[i].start);
    }
  }
}

TEST(EncodeTemplateTest, UniqueEmperor) {
  const auto t = EncodeTemplate(Tokenize("Japan 's Emperor Akihito offered sympathy"),
                                Z({"Japan", "Akihito"}), PlaceholderScheme::Unique());
  EXPECT_EQ(Text(t.tokens), "<BOS> <P1> 's Emperor <P2> offered sympathy <EOS>");
  EXPECT_EQ(t.slot_count, 2u);
  EXPECT_TRUE(IsWellFormed(t));
}

TEST(EncodeTemplateTest, EmptyConstraints) {
  const auto t = EncodeTemplate(Tokenize("hello world"), {}, PlaceholderScheme::Unique());
  EXPECT_EQ(Text(t.tokens), "<BOS> hello world <EOS>");
  EXPECT_EQ(t.slot_count, 0u);
}

TEST(EncodeTemplateTest, SingleMask) {
  const auto t = EncodeTemplate(Tokenize("the leading provider of currency software"),
                                Z({"leading", "currency", "software"}),
                                PlaceholderScheme::SingleMask());
  EXPECT_EQ(Text(t.tokens), "<BOS> the <M> provider of <M> <M> <EOS>");
  EXPECT_TRUE(IsWellFormed(t));
}

TEST(EncodeTemplateTest, SlotsNumberedByAppearance) {
  const auto t = EncodeTemplate(Tokenize("b then a"), Z({"a", "b"}),
                                PlaceholderScheme::Unique());
  EXPECT_EQ(Text(t.tokens), "<BOS> <P1> then <P2> <EOS>");
}

TEST(EncodeInputTest, Formats) {
  const auto u = PlaceholderScheme::Unique();
  EXPECT_EQ(Text(EncodeInput({}, Z({"Japan", "Akihito"}), u)),
            "TL;DR: <P1> Japan <P2> Akihito |");
  EXPECT_EQ(Text(EncodeInput(Tokenize("d1 d2 d3"), Z({"Japan"}), u)),
            "TL;DR: <P1> Japan | d1 d2 d3");
  EXPECT_EQ(Text(EncodeInput({}, {}, u)), "TL;DR: |");
  EXPECT_EQ(Text(EncodeInput({}, Z({"x y", "z"}), PlaceholderScheme::SingleMask())),
            "TL;DR: <M> x y <M> z |");
}

TEST(EncodeInputTest, LengthArithmetic) {
  const auto z = Z({"a b c", "d", "e f"});
  const auto src = Tokenize("s1 s2 s3 s4");
  // marker + separator + one slot per constraint + constraint tokens + source
  EXPECT_EQ(EncodeInput(src, z, PlaceholderScheme::Unique()).size(),
            2 + z.size() + TotalConstraintTokens(z) + src.size());
}

TEST(LexicalizeTest, Examples) {
  const auto u = PlaceholderScheme::Unique();
  Template t{Tokenize("<BOS> <P1> 's Emperor <P2> offered sympathy <EOS>"), 2, u};
  EXPECT_EQ(Text(Lexicalize(t, Z({"Japan", "Akihito"}))),
            "Japan 's Emperor Akihito offered sympathy");
  Template hi{Tokenize("<BOS> hi <EOS>"), 0, u};
  EXPECT_EQ(Text(Lexicalize(hi, {})), "hi");
  Template bad{Tokenize("<BOS> <P2> x <EOS>"), 2, u};
  EXPECT_THROW(Lexicalize(bad, Z({"a", "b"})), SlotMismatch);
}

TEST(LexicalizeTest, CountMismatches) {
  const auto u = PlaceholderScheme::Unique();
  EXPECT_THROW(Lexicalize({Tokenize("<BOS> <P1> <P1> <EOS>"), 1, u}, Z({"a"})),
               SlotMismatch);
  EXPECT_THROW(Lexicalize({Tokenize("<BOS> <P1> <EOS>"), 1, u}, Z({"a", "b"})),
               SlotMismatch);
  const auto m = PlaceholderScheme::SingleMask();
  EXPECT_THROW(Lexicalize({Tokenize("<BOS> <M> <EOS>"), 2, m}, Z({"a", "b"})),
               SlotMismatch);
  EXPECT_EQ(Text(Lexicalize({Tokenize("<BOS> <M> and <M> <EOS>"), 2, m},
                            Z({"x y", "z"}))),
            "x y and z");
}

TEST(RepairTemplateTest, Examples) {
  const auto u = PlaceholderScheme::Unique();
  auto r = RepairTemplate(Tokenize("<BOS> <P1> a <P1> <EOS>"), 2, u);
  EXPECT_EQ(Text(r.tmpl.tokens), "<BOS> <P1> a <P2> <EOS>");
  EXPECT_TRUE(r.repaired);

  r = RepairTemplate(Tokenize("a b"), 1, u);
  EXPECT_EQ(Text(r.tmpl.tokens), "<BOS> a b <P1> <EOS>");
  EXPECT_TRUE(r.repaired);

  const Tokens good = Tokenize("<BOS> x <P1> y <P2> <EOS>");
  r = RepairTemplate(good, 2, u);
  EXPECT_EQ(r.tmpl.tokens, good);
  EXPECT_FALSE(r.repaired);
}

TEST(RepairTemplateTest, DropsForeignAndOutOfRange) {
  const auto u = PlaceholderScheme::Unique();
  const auto r = RepairTemplate(Tokenize("<BOS> <M> <P3> a <BOS> <P2> <EOS> b"), 2, u);
  EXPECT_TRUE(IsWellFormed(r.tmpl));
  EXPECT_TRUE(r.repaired);
  EXPECT_EQ(Text(r.tmpl.tokens), "<BOS> a <P1> b <P2> <EOS>");
}

TEST(RepairTemplateTest, SingleMaskCount) {
  const auto m = PlaceholderScheme::SingleMask();
  auto r = RepairTemplate(Tokenize("<BOS> <M> a <M> <M> <EOS>"), 2, m);
  EXPECT_EQ(Text(r.tmpl.tokens), "<BOS> <M> a <M> <EOS>");
  r = RepairTemplate(Tokenize("<BOS> a <EOS>"), 2, m);
  EXPECT_EQ(Text(r.tmpl.tokens), "<BOS> a <M> <M> <EOS>");
}

// Random decoder garbage: repair is idempotent, well-formed, and lexicalizes
// to text containing every constraint.
TEST(RepairTemplateTest, RandomGarbageProperties) {
  Rng rng(5);
  const char* pool[] = {"<BOS>", "<EOS>", "<M>", "<P1>", "<P2>", "<P3>",
                        "<P4>", "w", "x", "TL;DR:"};
  for (const auto scheme : {PlaceholderScheme::Unique(), PlaceholderScheme::SingleMask()}) {
    for (int trial = 0; trial < 2000; ++trial) {
      Tokens raw(rng.Uniform(0, 9));
      for (auto& t : raw) t = pool[rng.Uniform(0, 9)];
      const std::size_t n = rng.Uniform(0, 4);
      const auto r = RepairTemplate(raw, n, scheme);
      ASSERT_TRUE(IsWellFormed(r.tmpl)) << Text(raw);
      const auto again = RepairTemplate(r.tmpl.tokens, n, scheme);
      EXPECT_FALSE(again.repaired);
      EXPECT_EQ(again.tmpl, r.tmpl);
      ConstraintSet z;
      for (std::size_t k = 0; k < n; ++k) {
        z.push_back(Lexicon::FromText("c" + std::to_string(k) + " d"));
      }
      const auto text = Lexicalize(r.tmpl, z);
      for (const auto& c : z) {
        EXPECT_NE(std::search(text.begin(), text.end(), c.tokens().begin(),
                              c.tokens().end()),
                  text.end());
      }
    }
  }
}

TEST(ExamplePairTest, RoundTripAndReorder) {
  const auto pair = MakeExamplePair({}, Tokenize("b then a"), Z({"a", "b"}),
                                    PlaceholderScheme::Unique());
  EXPECT_EQ(ConstraintTexts(pair.constraints), (std::vector<std::string>{"b", "a"}));
  EXPECT_EQ(Text(pair.input_tokens), "TL;DR: <P1> b <P2> a |");
  EXPECT_EQ(Text(pair.output_tokens), "<BOS> <P1> then <P2> <EOS>");
  const Template t{pair.output_tokens, 2, PlaceholderScheme::Unique()};
  EXPECT_EQ(Lexicalize(t, pair.constraints), pair.raw_target);
}

TEST(ExamplePairTest, TextPairKeepsInput) {
  const auto pair = MakeExamplePair({}, Tokenize("a b"), Z({"a"}),
                                    PlaceholderScheme::Unique());
  const auto text = ToTextPair(pair);
  EXPECT_EQ(text.input_tokens, pair.input_tokens);
  EXPECT_EQ(Text(text.output_tokens), "<BOS> a b <EOS>");
}

TEST(TokenizeTest, Rules) {
  EXPECT_EQ(Text(Tokenize("Hello, world!")), "Hello , world !");
  EXPECT_EQ(Text(Tokenize("Japan's well-known 3.5 1,000")), "Japan 's well-known 3.5 1,000");
  EXPECT_EQ(Text(Tokenize("don't 's x'")), "don 't 's x '");
  EXPECT_EQ(Text(Tokenize("TL;DR: <P1> x | y")), "TL;DR: <P1> x | y");
  EXPECT_EQ(Text(Tokenize("  a \t b\n")), "a b");
}

}  // namespace
}  // namespace atk
