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

// End-to-end acceptance checks on the bundled data. Prints one PASS/FAIL line
// per criterion and exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "atk/corpus.h"
#include "atk/decode.h"
#include "atk/lm.h"
#include "atk/metrics.h"
#include "atk/parallel.h"
#include "atk/placeholder_codec.h"
#include "atk/rng.h"
#include "commands.h"
#include "oracles/decode_oracle.h"
#include "oracles/metrics_oracle.h"
#include "support/files.h"
#include "support/test_models.h"

namespace atk {
namespace {

using nlohmann::json;
using testing::DataPath;
using testing::Slurp;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Runs the CLI in-process; throws on a nonzero exit.
std::string Atk(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::RunCli(args, out, err);
  if (code != 0) {
    throw std::runtime_error("atk " + args.front() + " exited " + std::to_string(code) +
                             ": " + err.str());
  }
  return out.str();
}

PlaceholderScheme SchemeFor(bool single_mask) {
  return single_mask ? PlaceholderScheme::SingleMask() : PlaceholderScheme::Unique();
}

// Shared artifacts, produced once through the CLI.
class Workspace {
 public:
  Workspace() {
    Atk({"build", "--input", DataPath("toy/keywords_train.jsonl"), "--output",
         File("kw_train.jsonl"), "--stats", File("kw_stats.json")});
    Atk({"train", "--input", File("kw_train.jsonl"), "--model", File("kw.atlm")});
    Atk({"train", "--input", File("kw_train.jsonl"), "--model", File("kw_text.atlm"),
         "--text"});
  }

  std::string File(const std::string& name) const { return dir_.File(name); }

 private:
  testing::TempDir dir_;
};

// 1. encode/lexicalize round trip over sampled keyword sets.
Outcome RoundTrip(bool single_mask) {
  const auto start = std::chrono::steady_clock::now();
  const auto scheme = SchemeFor(single_mask);
  const auto records = ReadJsonl(DataPath("toy/keywords_train.jsonl"));
  SamplingConfig sampling;
  sampling.stopwords = LoadStopwords(DataPath("stopwords_en.txt"));
  sampling.seed = 11;
  const auto built = BuildDataset(records, sampling, scheme, 0);
  std::size_t mismatches = 0;
  for (const auto& ex : built.examples) {
    const auto& p = ex.pair;
    const Template t = EncodeTemplate(p.raw_target, p.constraints, scheme);
    if (!IsWellFormed(t) || Lexicalize(t, p.constraints) != p.raw_target) ++mismatches;
  }
  const double secs = Seconds(start);
  const std::size_t n = built.examples.size();
  return {n >= 1000 && mismatches == 0 && secs < 5.0,
          Fmt("%s: %zu pairs, %zu mismatches, %.2f s (need >= 1000, 0, < 5 s)",
              std::string(scheme.name()).c_str(), n, mismatches, secs)};
}

// 2. autotemplate success rate on the keyword test split, trained and
// adversarial model.
Outcome HardConstraints(const ScoringModel& model, bool single_mask) {
  const auto scheme = SchemeFor(single_mask);
  const auto records = ReadJsonl(DataPath("toy/keywords_test.jsonl"));
  const testing::NoPlaceholderModel adversary(model);
  std::string detail = std::string(scheme.name()) + ":";
  bool pass = records.size() >= 500;
  for (const ScoringModel* m : {&model, static_cast<const ScoringModel*>(&adversary)}) {
    std::vector<Generation> gens(records.size());
    ParallelFor(records.size(), 0, [&](std::size_t i) {
      gens[i] = AutoTemplateGenerate(*m, records[i].source.value_or(Tokens{}),
                                     records[i].constraints.value_or(ConstraintSet{}),
                                     scheme, BeamConfig{});
    });
    std::vector<Tokens> outs;
    std::vector<ConstraintSet> zs;
    std::size_t repairs = 0, max_k = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      outs.push_back(gens[i].text);
      zs.push_back(records[i].constraints.value_or(ConstraintSet{}));
      max_k = std::max(max_k, zs.back().size());
      repairs += gens[i].diagnostics.repaired ? 1 : 0;
    }
    const auto sr = SuccessRate(outs, zs);
    pass = pass && sr.rate == 100.0 && max_k >= 6;
    detail += Fmt(" %s SR %.1f (%zu inputs, repaired %zu)",
                  m == &model ? "trained" : "adversarial", sr.rate, records.size(), repairs);
  }
  return {pass, detail};
}

// 3. Success rate by constraint count on the entity split.
Outcome SuccessCurve() {
  const auto start = std::chrono::steady_clock::now();
  testing::TempDir dir;
  Atk({"build", "--input", DataPath("toy/entities_train.jsonl"), "--output",
       dir.File("train.jsonl"), "--mode", "entities", "--stats", dir.File("s1.json")});
  Atk({"build", "--input", DataPath("toy/entities_test.jsonl"), "--output",
       dir.File("test.jsonl"), "--mode", "entities", "--stats", dir.File("s2.json")});
  Atk({"train", "--input", dir.File("train.jsonl"), "--model", dir.File("t.atlm")});
  Atk({"train", "--input", dir.File("train.jsonl"), "--model", dir.File("x.atlm"), "--text"});
  const json doc = json::parse(Atk({"compare", "--model", dir.File("t.atlm"),
                                    "--baseline-model", dir.File("x.atlm"), "--input",
                                    dir.File("test.jsonl"), "--mode", "entities"}));
  // bucket -> system -> rate
  std::map<int, std::map<std::string, double>> curve;
  for (const auto& s : doc["systems"]) {
    for (const auto& b : s["success_curve"]) {
      curve[b["constraints"].get<int>()][s["system"].get<std::string>()] =
          b["rate"].get<double>();
    }
  }
  bool pass = curve.size() >= 3;
  double prev_beam = 101.0;
  std::string row;
  for (const auto& [k, sr] : curve) {
    const double beam = sr.at("beam"), gbs = sr.at("gbs"), at = sr.at("autotemplate");
    pass = pass && beam <= prev_beam && gbs >= beam && at == 100.0 && (k < 3 || beam < 100.0);
    prev_beam = beam;
    row += Fmt(" |Z|=%d %.0f/%.0f/%.0f", k, beam, gbs, at);
  }
  const double secs = Seconds(start);
  pass = pass && secs < 60.0;
  return {pass, "beam/gbs/autotemplate" + row + Fmt(", %.1f s", secs)};
}

// 4. Metrics against the brute-force oracles.
Outcome MetricOracles() {
  static const char* words[] = {"a", "b", "c", "d", "e"};
  Rng rng(4242);
  double worst = 0.0;
  for (int corpus = 0; corpus < 100; ++corpus) {
    std::vector<Tokens> hyps, refs;
    const auto pairs = rng.Uniform(1, 20);
    const auto alphabet = rng.Uniform(2, 5);
    for (std::size_t i = 0; i < pairs; ++i) {
      Tokens h(rng.Uniform(0, 8)), r(rng.Uniform(1, 8));
      for (auto& t : h) t = words[rng.Uniform(0, alphabet - 1)];
      for (auto& t : r) t = words[rng.Uniform(0, alphabet - 1)];
      hyps.push_back(std::move(h));
      refs.push_back(std::move(r));
    }
    auto track = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };
    for (int n : {2, 4}) {
      track(Bleu(hyps, refs, n), oracle::Bleu(hyps, refs, n));
      track(Nist(hyps, refs, n), oracle::Nist(hyps, refs, n));
    }
    const auto got = Rouge(hyps, refs);
    const auto want = oracle::RougeScores(hyps, refs);
    track(got.rouge1_f, want.r1);
    track(got.rouge2_f, want.r2);
    track(got.rougeL_f, want.rl);
  }
  std::size_t lcs_bad = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    Tokens x(rng.Uniform(0, 8)), y(rng.Uniform(0, 8));
    for (auto& t : x) t = words[rng.Uniform(0, 2)];
    for (auto& t : y) t = words[rng.Uniform(0, 2)];
    lcs_bad += LcsLength(x, y) != oracle::LcsBrute(x, y) ? 1 : 0;
  }
  const std::vector<Tokens> refs = {Tokenize("a b c"), Tokenize("a b d")};
  const std::vector<Tokens> hyps = {Tokenize("a b c"), Tokenize("a d")};
  const double beta = std::log(0.5) / std::pow(std::log(2.0 / 3.0), 2);
  const double hand = ((3 * std::log2(3.0) + 2 * std::log2(6.0)) / 5.0 + 1.0 / 3.0) *
                      std::exp(beta * std::pow(std::log(5.0 / 6.0), 2));
  const double hand_err = std::abs(Nist(hyps, refs, 2) - hand);
  return {worst <= 1e-9 && lcs_bad == 0 && hand_err <= 1e-15,
          Fmt("max |diff| %.1e over 100 corpora (tol 1e-9), LCS mismatches %zu/2000, "
              "NIST hand case error %.1e",
              worst, lcs_bad, hand_err)};
}

std::size_t SequenceCount(int content, int max_len) {
  std::size_t total = 0, layer = 1;
  for (int k = 0; k + 2 <= max_len; ++k) {
    total += layer;
    layer *= static_cast<std::size_t>(content);
  }
  return total;
}

// 5. Decoders against exhaustive enumeration.
Outcome DecoderOptimality() {
  int beam_ok = 0, gbs_ok = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int content = 1 + static_cast<int>(seed % 4);
    const int max_len = 2 + static_cast<int>((seed / 4) % 5);
    const testing::RandomTableModel m(testing::LetterVocab(content), 77 + seed);
    const int width = static_cast<int>(SequenceCount(content, max_len));
    const auto want = *oracle::Best(oracle::EnumerateSequences(m, {}, max_len), 1.0);
    const auto got = BeamSearch(m, {}, BeamConfig{width, max_len, 1.0});
    beam_ok += !got.empty() && got[0].tokens == want.tokens ? 1 : 0;

    const int gc = 2 + static_cast<int>(seed % 3);
    const int gl = 3 + static_cast<int>((seed / 3) % 4);
    const testing::RandomTableModel g(testing::LetterVocab(gc), 5000 + seed);
    Rng rng(seed);
    std::vector<std::vector<TokenId>> z(rng.Uniform(1, 2));
    for (auto& c : z) {
      c.resize(rng.Uniform(1, 2));
      for (auto& t : c) t = static_cast<TokenId>(rng.Uniform(2, 1 + gc));
    }
    const auto gwant = oracle::GbsBest(g, {}, z, gl, 1.0);
    const auto ggot =
        GridBeamSearch(g, {}, z, BeamConfig{static_cast<int>(8 * SequenceCount(gc, gl)), gl, 1.0});
    gbs_ok += !ggot.hypotheses.empty() && ggot.bank == gwant.bank &&
                      ggot.hypotheses[0].tokens == gwant.best.tokens
                  ? 1
                  : 0;
  }
  return {beam_ok == 50 && gbs_ok == 50,
          Fmt("beam %d/50, grid beam %d/50 agree with enumeration", beam_ok, gbs_ok)};
}

// 6. next-distribution normalization on the trained keyword model.
Outcome Normalization(const CondNgramModel& m) {
  Rng rng(606);
  const auto n = m.vocab().size();
  double worst_sum = 0.0, min_p = 1.0;
  for (int probe = 0; probe < 1000; ++probe) {
    std::vector<TokenId> src(rng.Uniform(0, 16)), prefix(rng.Uniform(0, 12));
    for (auto& t : src) t = static_cast<TokenId>(rng.Uniform(0, n - 1));
    for (auto& t : prefix) t = static_cast<TokenId>(rng.Uniform(0, n - 1));
    prefix.insert(prefix.begin(), m.vocab().bos());
    const auto p = m.NextDistribution(src, prefix);
    worst_sum = std::max(worst_sum, std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0));
    min_p = std::min(min_p, *std::min_element(p.begin(), p.end()));
  }
  return {worst_sum <= 1e-9 && min_p > 0.0,
          Fmt("1000 probes, max |sum-1| %.1e (tol 1e-9), min p %.2e", worst_sum, min_p)};
}

// 7. Single-mask pipeline through the CLI.
Outcome SingleMask() {
  testing::TempDir dir;
  Atk({"build", "--input", DataPath("toy/keywords_train.jsonl"), "--output",
       dir.File("train.jsonl"), "--single-mask", "--stats", dir.File("stats.json")});
  Atk({"train", "--input", dir.File("train.jsonl"), "--model", dir.File("m.atlm")});
  Atk({"generate", "--model", dir.File("m.atlm"), "--input", DataPath("toy/keywords_test.jsonl"),
       "--output", dir.File("out.jsonl"), "--single-mask"});
  const json report = json::parse(Atk({"eval", "--input", dir.File("out.jsonl"),
                                       "--references", DataPath("toy/keywords_test.jsonl")}));
  const auto stats = json::parse(Slurp(dir.File("stats.json")));
  const Outcome rt = RoundTrip(true);
  const Outcome hc = HardConstraints(CondNgramModel::Load(dir.File("m.atlm")), true);
  const bool pass = report["mode"] == "single-mask" && stats["mode"] == "single-mask" &&
                    report["success_rate"].get<double>() == 100.0 && rt.pass && hc.pass;
  return {pass, Fmt("report mode %s, CLI SR %.1f, repairs %d; ",
                    report["mode"].get<std::string>().c_str(),
                    report["success_rate"].get<double>(), report["repairs"].get<int>()) +
                    rt.detail + ";" + hc.detail.substr(hc.detail.find(':') + 1)};
}

// 8. compare twice with the same flags.
Outcome Determinism(const Workspace& ws) {
  std::vector<std::string> args = {"compare", "--model", ws.File("kw.atlm"),
                                   "--baseline-model", ws.File("kw_text.atlm"), "--input",
                                   DataPath("toy/keywords_test.jsonl"), "--seed", "0",
                                   "--workers", "4", "--output"};
  auto a = args, b = args;
  a.push_back(ws.File("cmp_a.json"));
  b.push_back(ws.File("cmp_b.json"));
  Atk(a);
  Atk(b);
  const auto ra = Slurp(ws.File("cmp_a.json")), rb = Slurp(ws.File("cmp_b.json"));
  return {!ra.empty() && ra == rb, Fmt("%zu-byte reports, %s", ra.size(),
                                       ra == rb ? "identical" : "differ")};
}

int Main() {
  setenv("ATK_LOG", "0", 0);
  const Workspace ws;
  const auto kw = CondNgramModel::Load(ws.File("kw.atlm"));
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"round-trip", [] {
         const auto u = RoundTrip(false), s = RoundTrip(true);
         return Outcome{u.pass && s.pass, u.detail + "; " + s.detail};
       }},
      {"hard-constraint guarantee", [&] { return HardConstraints(kw, false); }},
      {"success-rate curve", SuccessCurve},
      {"metric oracles", MetricOracles},
      {"decoder optimality", DecoderOptimality},
      {"normalization", [&] { return Normalization(kw); }},
      {"single-mask pipeline", SingleMask},
      {"determinism", [&] { return Determinism(ws); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace atk

int main() { return atk::Main(); }
