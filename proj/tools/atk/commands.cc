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

#include "commands.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "atk/corpus.h"
#include "atk/decode.h"
#include "atk/errors.h"
#include "atk/lm.h"
#include "atk/metrics.h"
#include "atk/parallel.h"
#include "atk/placeholder_codec.h"
#include "atk/tokens.h"

#ifndef ATK_DEFAULT_DATA_DIR
#define ATK_DEFAULT_DATA_DIR "data"
#endif

namespace atk::cli {
namespace {

using nlohmann::json;

// Raised for misaligned or otherwise inconsistent inputs (exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string input;
  std::string output;
  std::string model;
  std::string baseline_model;
  std::string references;
  std::string stats;
  std::string mode = "keywords";
  std::string system = "autotemplate";
  std::string stopwords = ATK_DEFAULT_DATA_DIR "/stopwords_en.txt";
  std::string gazetteer = ATK_DEFAULT_DATA_DIR "/gazetteer.txt";
  int beam_size = 5;
  int max_len = 64;
  double length_penalty = 1.0;
  std::uint64_t seed = 0;
  bool single_mask = false;
  int workers = 0;
  bool table = false;
  bool text = false;
  int min_k = 1;
  int max_k = 6;
  int order = 3;
  double lambda_copy = 0.3;
  double alpha = 0.1;

  PlaceholderScheme scheme() const {
    return single_mask ? PlaceholderScheme::SingleMask()
                       : PlaceholderScheme::Unique();
  }
  BeamConfig beam() const {
    BeamConfig b{beam_size, max_len, length_penalty};
    b.Validate();
    return b;
  }
};

// ATK_LOG: 0/quiet, 1/info (default), 2/debug.
class Logger {
 public:
  explicit Logger(std::ostream& err) : err_(err) {
    const char* env = std::getenv("ATK_LOG");
    if (!env) return;
    const std::string_view v(env);
    if (v == "0" || v == "quiet" || v == "error") level_ = 0;
    if (v == "2" || v == "debug") level_ = 2;
  }
  void Info(const std::string& msg) const {
    if (level_ >= 1) err_ << "atk: " << msg << '\n';
  }
  void Debug(const std::string& msg) const {
    if (level_ >= 2) err_ << "atk: " << msg << '\n';
  }
  void Error(const std::string& msg) const { err_ << "atk: error: " << msg << '\n'; }

 private:
  std::ostream& err_;
  int level_ = 1;
};

// Writes to `path`, or to `fallback` when path is empty.
void Emit(const std::string& path, const std::string& text,
          std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("write failed: " + path);
}

std::string JsonLines(const std::vector<json>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

std::string RecordId(const RawRecord& r, std::size_t index) {
  return r.id.value_or(std::to_string(index));
}

std::vector<Generation> GenerateAll(System system, const ScoringModel& model,
                                    std::span<const RawRecord> records,
                                    const RunConfig& c) {
  const auto scheme = c.scheme();
  const auto beam = c.beam();
  std::vector<Generation> out(records.size());
  ParallelFor(records.size(), c.workers, [&](std::size_t i) {
    const auto& r = records[i];
    out[i] = Generate(system, model, r.source.value_or(Tokens{}),
                      r.constraints.value_or(ConstraintSet{}), scheme, beam);
  });
  return out;
}

// --- build -----------------------------------------------------------------

int CmdBuild(const RunConfig& c, std::ostream& out, const Logger& log) {
  const auto records = ReadJsonl(c.input);
  ConstraintSource source;
  if (c.mode == "keywords") {
    SamplingConfig sampling;
    sampling.min_k = c.min_k;
    sampling.max_k = c.max_k;
    sampling.seed = c.seed;
    sampling.stopwords = LoadStopwords(c.stopwords);
    source = std::move(sampling);
  } else {
    source = Gazetteer::Load(c.gazetteer);
  }
  const auto result = BuildDataset(records, source, c.scheme(), c.workers);
  for (const auto& s : result.skipped) {
    log.Debug("skipped record " + std::to_string(s.index) + ": " + s.reason);
  }
  log.Info("built " + std::to_string(result.examples.size()) + " examples, " +
           std::to_string(result.skipped.size()) + " skipped");
  if (result.examples.empty()) {
    log.Error("no examples produced");
    return kEmptyData;
  }
  WriteExamplesJsonl(c.output, result.examples);
  json stats = result.stats.ToJson();
  stats["mode"] = std::string(c.scheme().name());
  stats["task"] = c.mode;
  stats["seed"] = c.seed;
  Emit(c.stats, stats.dump(2) + "\n", out);
  return kOk;
}

// --- train -----------------------------------------------------------------

int CmdTrain(const RunConfig& c, const Logger& log) {
  const auto examples = ReadExamplesJsonl(c.input);
  if (examples.empty()) {
    log.Error("empty training corpus");
    return kEmptyData;
  }
  std::vector<ExamplePair> pairs;
  pairs.reserve(examples.size());
  for (const auto& e : examples) {
    pairs.push_back(c.text ? ToTextPair(e.pair) : e.pair);
  }
  LmConfig config;
  config.order = c.order;
  config.lambda_copy = c.lambda_copy;
  config.alpha = c.alpha;
  const auto model = CondNgramModel::Fit(pairs, config);
  model.Save(c.model);
  log.Info(std::string(c.text ? "text" : "template") + " model trained on " +
           std::to_string(pairs.size()) + " examples, vocab " +
           std::to_string(model.vocab().size()));
  return kOk;
}

// --- generate --------------------------------------------------------------

System SystemFromFlag(const std::string& name) {
  auto s = ParseSystem(name);
  if (!s) throw InputError("unknown system: " + name);
  return *s;
}

int CmdGenerate(const RunConfig& c, std::ostream& out, const Logger& log) {
  const System system = SystemFromFlag(c.system);
  const auto model = CondNgramModel::Load(c.model);
  const auto records = ReadJsonl(c.input, {.require_target = false});
  const auto gens = GenerateAll(system, model, records, c);
  std::vector<json> rows;
  rows.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    rows.push_back(
        {{"id", RecordId(r, i)},
         {"system", std::string(SystemName(system))},
         {"mode", std::string(c.scheme().name())},
         {"output", JoinTokens(gens[i].text)},
         {"constraints",
          ConstraintTexts(r.constraints.value_or(ConstraintSet{}))},
         {"diagnostics", gens[i].diagnostics.ToJson()}});
  }
  Emit(c.output, JsonLines(rows), out);
  log.Info("generated " + std::to_string(rows.size()) + " outputs with " +
           std::string(SystemName(system)));
  return kOk;
}

// --- eval ------------------------------------------------------------------

struct OutputRecord {
  std::optional<std::string> id;
  std::string system;
  std::string mode;
  Tokens output;
  std::optional<ConstraintSet> constraints;
  bool repaired = false;
};

std::vector<OutputRecord> ReadOutputs(const std::string& path) {
  std::vector<OutputRecord> out;
  std::size_t line_no = 0;
  for (const auto& line : ReadLines(path)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    // Reuse the raw-record parser for id and constraints.
    const RawRecord base = ParseRecord(line, line_no, {.require_target = false});
    const json j = json::parse(line);
    OutputRecord rec;
    rec.id = base.id;
    rec.constraints = base.constraints;
    auto text = j.find("output");
    if (text == j.end() || !text->is_string()) {
      throw ParseError(line_no, "missing \"output\" string");
    }
    rec.output = Tokenize(text->get<std::string>());
    rec.system = j.value("system", std::string());
    rec.mode = j.value("mode", std::string());
    if (auto d = j.find("diagnostics"); d != j.end() && d->is_object()) {
      rec.repaired = d->value("repaired", false);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

int CmdEval(const RunConfig& c, std::ostream& out, const Logger& log) {
  const auto outputs = ReadOutputs(c.input);
  const auto refs = ReadJsonl(c.references);
  if (outputs.size() != refs.size()) {
    throw InputError("outputs have " + std::to_string(outputs.size()) +
                     " records, references " + std::to_string(refs.size()));
  }
  if (outputs.empty()) {
    log.Error("nothing to evaluate");
    return kEmptyData;
  }
  std::vector<Tokens> hyps, golds;
  std::vector<ConstraintSet> constraints;
  std::size_t repairs = 0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto& o = outputs[i];
    const auto& r = refs[i];
    if (o.id && r.id && *o.id != *r.id) {
      throw InputError("id mismatch at record " + std::to_string(i + 1) +
                       ": " + *o.id + " vs " + *r.id);
    }
    hyps.push_back(o.output);
    golds.push_back(r.target);
    constraints.push_back(o.constraints ? *o.constraints
                                        : r.constraints.value_or(ConstraintSet{}));
    repairs += o.repaired ? 1 : 0;
  }
  EvalReport report = Evaluate(hyps, golds, constraints);
  report.system = outputs.front().system;
  report.mode = outputs.front().mode;
  report.repairs = repairs;
  const std::string json_text = report.ToJson().dump(2) + "\n";
  if (c.table) {
    if (!c.output.empty()) Emit(c.output, json_text, out);
    const EvalReport one[] = {report};
    out << RenderTable(one);
  } else {
    Emit(c.output, json_text, out);
  }
  return kOk;
}

// --- compare ---------------------------------------------------------------

int CmdCompare(const RunConfig& c, std::ostream& out, const Logger& log) {
  const auto model = CondNgramModel::Load(c.model);
  std::optional<CondNgramModel> baseline;
  if (!c.baseline_model.empty()) {
    baseline = CondNgramModel::Load(c.baseline_model);
  }
  const auto records = ReadJsonl(c.input);
  if (records.empty()) {
    log.Error("empty test set");
    return kEmptyData;
  }
  std::vector<Tokens> golds;
  std::vector<ConstraintSet> constraints;
  for (const auto& r : records) {
    golds.push_back(r.target);
    constraints.push_back(r.constraints.value_or(ConstraintSet{}));
  }

  std::vector<EvalReport> reports;
  for (System system : {System::kBeam, System::kGbs, System::kAutoTemplate}) {
    const bool direct = system != System::kAutoTemplate && baseline;
    const auto gens =
        GenerateAll(system, direct ? *baseline : model, records, c);
    std::vector<Tokens> hyps;
    std::size_t repairs = 0;
    for (const auto& g : gens) {
      hyps.push_back(g.text);
      repairs += g.diagnostics.repaired ? 1 : 0;
    }
    EvalReport report = Evaluate(hyps, golds, constraints);
    report.system = std::string(SystemName(system));
    report.mode = std::string(c.scheme().name());
    report.repairs = repairs;
    log.Info(report.system + ": SR " + std::to_string(report.success.rate));
    reports.push_back(std::move(report));
  }

  json systems = json::array();
  for (const auto& r : reports) systems.push_back(r.ToJson());
  const json doc = {{"mode", std::string(c.scheme().name())},
                    {"task", c.mode},
                    {"count", records.size()},
                    {"seed", c.seed},
                    {"beam_size", c.beam_size},
                    {"max_len", c.max_len},
                    {"length_penalty", c.length_penalty},
                    {"baseline", baseline ? "text-model" : "template-model"},
                    {"systems", systems}};
  const std::string json_text = doc.dump(2) + "\n";
  if (c.table) {
    if (!c.output.empty()) Emit(c.output, json_text, out);
    out << RenderTable(reports) << '\n' << RenderSuccessCurve(reports);
  } else {
    Emit(c.output, json_text, out);
  }
  return kOk;
}

// --- flag wiring -----------------------------------------------------------

const auto kWritablePath = CLI::Validator(
    [](std::string& path) -> std::string {
      const auto parent = std::filesystem::path(path).parent_path();
      if (!parent.empty() && !std::filesystem::is_directory(parent)) {
        return "directory does not exist: " + parent.string();
      }
      return {};
    },
    "WRITABLE");

void AddBeamFlags(CLI::App* app, RunConfig& c) {
  app->add_option("--beam-size", c.beam_size, "Beam width")
      ->check(CLI::PositiveNumber);
  app->add_option("--max-len", c.max_len,
                  "Maximum output length including <BOS> and <EOS>")
      ->check(CLI::Range(2, 100000));
  app->add_option("--length-penalty", c.length_penalty,
                  "Exponent of the length normalization")
      ->check(CLI::NonNegativeNumber);
  app->add_flag("--single-mask", c.single_mask,
                "Use one shared <M> placeholder for every slot");
  app->add_option("--workers", c.workers, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--seed", c.seed, "Random seed");
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  RunConfig c;
  const Logger log(err);
  CLI::App app{"Template-based lexically constrained generation toolkit", "atk"};
  app.set_config("--config", "", "INI/TOML file with flag values");
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build", "Build training examples from raw JSONL");
  build->add_option("--input", c.input, "Raw records")->required()->check(CLI::ExistingFile);
  build->add_option("--output", c.output, "Examples JSONL")->required()->check(kWritablePath);
  build->add_option("--stats", c.stats, "Stats JSON (default: stdout)")->check(kWritablePath);
  build->add_option("--mode", c.mode, "Constraint source")
      ->check(CLI::IsMember({"keywords", "entities"}));
  build->add_option("--seed", c.seed, "Keyword sampling seed");
  build->add_option("--min-k", c.min_k, "Fewest keywords per sentence")->check(CLI::PositiveNumber);
  build->add_option("--max-k", c.max_k, "Most keywords per sentence")->check(CLI::PositiveNumber);
  build->add_option("--stopwords", c.stopwords, "Stopword list")->check(CLI::ExistingFile);
  build->add_option("--gazetteer", c.gazetteer, "Entity list")->check(CLI::ExistingFile);
  build->add_flag("--single-mask", c.single_mask, "Use one shared <M> placeholder");
  build->add_option("--workers", c.workers, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  auto* train = app.add_subcommand("train", "Fit the n-gram template model");
  train->add_option("--input", c.input, "Examples JSONL")->required()->check(CLI::ExistingFile);
  train->add_option("--model", c.model, "Model file to write")->required()->check(kWritablePath);
  train->add_option("--order", c.order, "n-gram order")->check(CLI::Range(2, 8));
  train->add_option("--lambda-copy", c.lambda_copy, "Copy weight")->check(CLI::Range(0.0, 0.999));
  train->add_option("--alpha", c.alpha, "Additive smoothing")
      ->check(CLI::NonNegativeNumber);
  train->add_flag("--text", c.text,
                  "Fit a direct-text model on raw targets (for beam/gbs baselines)");

  auto* generate = app.add_subcommand("generate", "Generate outputs for constrained inputs");
  generate->add_option("--model", c.model, "Model file")->required()->check(CLI::ExistingFile);
  generate->add_option("--input", c.input, "Input JSONL with constraints")
      ->required()->check(CLI::ExistingFile);
  generate->add_option("--output", c.output, "Outputs JSONL (default: stdout)")
      ->check(kWritablePath);
  generate->add_option("--system", c.system, "autotemplate, beam or gbs")
      ->check(CLI::IsMember({"autotemplate", "beam", "gbs"}));
  AddBeamFlags(generate, c);

  auto* eval = app.add_subcommand("eval", "Score outputs against references");
  eval->add_option("--input", c.input, "Outputs JSONL from generate")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--references", c.references, "Reference JSONL with targets")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--output", c.output, "Report JSON (default: stdout)")->check(kWritablePath);
  eval->add_flag("--table", c.table, "Print a plain-text table");

  auto* compare = app.add_subcommand("compare", "Run beam, gbs and autotemplate side by side");
  compare->add_option("--model", c.model, "Model file")->required()->check(CLI::ExistingFile);
  compare->add_option("--input", c.input, "Test JSONL with targets and constraints")
      ->required()->check(CLI::ExistingFile);
  compare->add_option("--output", c.output, "Report JSON (default: stdout)")->check(kWritablePath);
  compare->add_option("--baseline-model", c.baseline_model,
                      "Direct-text model for beam and gbs (default: --model)")
      ->check(CLI::ExistingFile);
  compare->add_option("--mode", c.mode, "Task label for the report")
      ->check(CLI::IsMember({"keywords", "entities"}));
  compare->add_flag("--table", c.table, "Print tables instead of JSON on stdout");
  AddBeamFlags(compare, c);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  if (c.min_k > c.max_k) {
    log.Error("--min-k exceeds --max-k");
    return kInputError;
  }

  try {
    if (build->parsed()) return CmdBuild(c, out, log);
    if (train->parsed()) return CmdTrain(c, log);
    if (generate->parsed()) return CmdGenerate(c, out, log);
    if (eval->parsed()) return CmdEval(c, out, log);
    if (compare->parsed()) return CmdCompare(c, out, log);
  } catch (const EmptyCorpus& e) {
    log.Error(e.what());
    return kEmptyData;
  } catch (const Error& e) {
    log.Error(e.what());
    return kInputError;
  } catch (const std::invalid_argument& e) {
    log.Error(e.what());
    return kInputError;
  } catch (const std::exception& e) {
    log.Error(std::string("internal: ") + e.what());
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace atk::cli
