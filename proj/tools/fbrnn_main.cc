// Copyright 2026 The FBRNN Authors.
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

// fbrnn: command-line driver for lexicon building, candidate dumps,
// training, prediction, scoring, gradient checks, ablation and synthetic
// corpus generation.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fbrnn/ablation.h"
#include "fbrnn/candidates.h"
#include "fbrnn/checkpoint.h"
#include "fbrnn/corpus.h"
#include "fbrnn/errors.h"
#include "fbrnn/evaluation.h"
#include "fbrnn/io.h"
#include "fbrnn/model.h"
#include "fbrnn/run_config.h"
#include "fbrnn/synthetic.h"
#include "fbrnn/training.h"

namespace fs = std::filesystem;
using namespace fbrnn;

namespace {

const std::vector<std::string> kModelKeys = {
    "cell",       "word_dim",    "branch_dim", "use_branch", "hidden",    "layers",
    "head",       "head_hidden", "head_layers", "dropout",   "optimizer", "lr",
    "beta1",      "beta2",       "eps",        "sgd_lr",     "clip_norm", "max_epochs",
    "patience",   "seed",        "batch_size", "neg_keep",   "max_nugget_len",
    "expand",     "threshold"};

const std::vector<std::string> kOutputKeys = {"output_dir", "run_dir"};

std::string Dashed(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& about,
          const std::string& requires_text, std::vector<std::vector<std::string>> groups)
      : app_(parent.add_subcommand(name, about)) {
    app_->add_option("--config", config_file_, "flat 'key = value' configuration file");
    for (const auto& group : groups) {
      for (const auto& key : group) {
        if (values_.count(key)) continue;
        const KeySpec& spec = RunConfig::Spec(key);
        std::string help = spec.help;
        if (!spec.default_value.empty()) help += " (default " + spec.default_value + ")";
        options_[key] = app_->add_option("--" + Dashed(key), values_[key], help);
      }
    }
    app_->footer(requires_text);
  }

  CLI::App* app() const { return app_; }

  // File values first, then flags on top.
  RunConfig Resolve() const {
    RunConfig cfg;
    if (!config_file_.empty()) cfg.LoadFile(config_file_);
    for (const auto& [key, opt] : options_) {
      if (opt->count() > 0) cfg.Set(key, values_.at(key));
    }
    return cfg;
  }

 private:
  CLI::App* app_;
  std::string config_file_;
  std::map<std::string, std::string> values_;
  std::map<std::string, CLI::Option*> options_;
};

std::vector<std::string> Concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void WriteOutput(const fs::path& dir, const std::string& name, const std::string& content) {
  WriteFileAtomic(dir / name, content);
}

// Dev corpus from `dev`, or a seeded split of `train` by dev_fraction.
std::pair<Corpus, std::optional<Corpus>> LoadTrainDev(const RunConfig& cfg,
                                                     const LabelSet& labels) {
  Corpus train = LoadCorpus(*cfg.GetPath("train"), labels);
  if (auto dev_path = cfg.GetPath("dev")) {
    return {std::move(train), LoadCorpus(*dev_path, labels)};
  }
  const double frac = cfg.GetDouble("dev_fraction");
  if (frac <= 0.0) return {std::move(train), std::nullopt};
  Rng rng(static_cast<uint64_t>(cfg.GetInt("seed")));
  auto [tr, dv] = SplitCorpus(train, frac, rng);
  return {std::move(tr), std::move(dv)};
}

PipelineInputs MakePipelineInputs(const RunConfig& cfg) {
  PipelineInputs inputs;
  if (auto p = cfg.GetPath("paraphrases")) inputs.paraphrases = LoadParaphrases(*p);
  inputs.embeddings = cfg.GetPath("embeddings");
  return inputs;
}

int RunSynth(const RunConfig& cfg) {
  cfg.CheckOptionalFiles({"grammar"});
  SyntheticGrammar grammar;
  if (auto g = cfg.GetPath("grammar")) {
    grammar = LoadGrammar(*g);
  } else {
    grammar = cfg.Get("preset") == "positional" ? PositionalGrammar() : DefaultGrammar();
  }
  const int n = cfg.GetInt("sentences");
  if (n <= 0) throw ConfigError("sentences must be positive");
  const double frac = cfg.GetDouble("dev_fraction");
  if (frac < 0.0 || frac >= 1.0) throw ConfigError("dev_fraction must be in [0, 1)");
  Rng rng(static_cast<uint64_t>(cfg.GetInt("seed")));
  Corpus all = MakeSyntheticCorpus(grammar, static_cast<size_t>(n), rng);
  Corpus train = all, dev{all.labels, {}};
  if (frac > 0.0) std::tie(train, dev) = SplitCorpus(all, frac, rng);

  const fs::path dir = cfg.ResolveRunDir();
  WriteOutput(dir, "train.jsonl", CorpusToJsonLines(train));
  if (frac > 0.0) WriteOutput(dir, "dev.jsonl", CorpusToJsonLines(dev));
  WriteOutput(dir, "labels.json", all.labels.ToJson());
  WriteOutput(dir, "paraphrases.tsv", ParaphrasesToTsv(grammar));
  std::cout << "generated " << train.size() << " train / " << dev.size()
            << " dev sentences, " << all.labels.num_types() << " event types\n"
            << "wrote " << dir.string() << "\n";
  return 0;
}

int RunBuildLexicon(const RunConfig& cfg) {
  cfg.RequireFiles({"train"});
  cfg.CheckOptionalFiles({"paraphrases"});
  const LabelSet labels = cfg.Labels();
  const Corpus train = LoadCorpus(*cfg.GetPath("train"), labels);
  const TriggerLexicon lexicon = BuildTriggerLexicon(train, cfg.GetPath("paraphrases"));
  size_t from_paraphrases = 0;
  for (const auto& [word, entry] : lexicon.entries()) {
    if (entry.train_count == 0) ++from_paraphrases;
  }
  const fs::path dir = cfg.ResolveRunDir();
  WriteOutput(dir, "lexicon.tsv", lexicon.ToTsv());
  std::cout << "lexicon: " << lexicon.size() << " words (" << from_paraphrases
            << " only from paraphrases)\n"
            << "wrote " << (dir / "lexicon.tsv").string() << "\n";
  return 0;
}

int RunCandidates(const RunConfig& cfg) {
  cfg.RequireFiles({"corpus"});
  cfg.CheckOptionalFiles({"lexicon", "train", "paraphrases"});
  const LabelSet labels = cfg.Labels();
  const Corpus corpus = LoadCorpus(*cfg.GetPath("corpus"), labels);
  TriggerLexicon lexicon;
  if (auto lex = cfg.GetPath("lexicon")) {
    lexicon = TriggerLexicon::Load(*lex);
  } else if (auto train = cfg.GetPath("train")) {
    lexicon = BuildTriggerLexicon(LoadCorpus(*train, labels), cfg.GetPath("paraphrases"));
  } else {
    throw ConfigError("candidates needs 'lexicon' or 'train' to build one");
  }
  const TrainConfig tc = cfg.ToTrainConfig();
  const auto cands = GenerateCandidates(corpus, lexicon, tc.candidates);
  const CandidateCoverage cov = MeasureCoverage(corpus, cands);
  const fs::path dir = cfg.ResolveRunDir();
  WriteOutput(dir, "candidates.jsonl", CandidatesToJsonLines(corpus, cands));
  std::printf("candidates: %zu (%zu positive), gold covered %zu/%zu\n", cov.candidates,
              cov.positives, cov.gold_covered, cov.gold);
  std::cout << "wrote " << (dir / "candidates.jsonl").string() << "\n";
  return 0;
}

int RunTrain(const RunConfig& cfg) {
  cfg.RequireFiles({"train"});
  cfg.CheckOptionalFiles({"dev", "embeddings", "paraphrases"});
  const LabelSet labels = cfg.Labels();
  TrainConfig tc = cfg.ToTrainConfig();
  tc.model.num_classes = labels.num_classes();
  tc.Validate();
  auto [train, dev] = LoadTrainDev(cfg, labels);
  const PipelineInputs inputs = MakePipelineInputs(cfg);

  PipelineResult result = TrainPipeline(train, dev ? &*dev : nullptr, inputs, tc);

  const fs::path dir = cfg.ResolveRunDir();
  Checkpoint ckpt{result.model, labels, result.lexicon, tc.candidates, tc.threshold};
  SaveCheckpoint(dir / "checkpoint.json", ckpt);
  WriteOutput(dir, "train_log.csv", result.log.ToCsv(cfg.GetBool("log_timing")));
  WriteOutput(dir, "lexicon.tsv", result.lexicon.ToTsv());
  WriteOutput(dir, "config.txt", cfg.Canonical());

  std::cout << result.log.ToTable();
  if (inputs.embeddings) {
    std::cout << "embeddings: " << result.embedding_stats.pretrained_rows << " pretrained, "
              << result.embedding_stats.oov_rows << " random (incl. UNK)\n";
  }
  if (dev && !dev->empty()) {
    const Dataset dev_data = MakeDataset(*dev, result.lexicon, tc.candidates);
    const PRFReport report = Evaluate(result.model, dev_data, tc.threshold);
    WriteOutput(dir, "dev_report.json", report.ToJson().dump(2) + "\n");
    std::cout << "best epoch " << result.log.best_epoch << ": dev " << FormatPRF(report)
              << "\n";
  }
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

Checkpoint LoadCheckpointFor(const RunConfig& cfg) {
  return LoadCheckpoint(*cfg.GetPath("checkpoint"));
}

double EffectiveThreshold(const RunConfig& cfg, const Checkpoint& ckpt) {
  return cfg.IsSet("threshold") ? cfg.GetDouble("threshold") : ckpt.threshold;
}

TriggerLexicon CheckpointLexicon(const RunConfig& cfg, const Checkpoint& ckpt) {
  if (auto lex = cfg.GetPath("lexicon")) return TriggerLexicon::Load(*lex);
  if (!ckpt.lexicon) throw ConfigError("checkpoint has no lexicon; pass --lexicon");
  return *ckpt.lexicon;
}

int RunPredict(const RunConfig& cfg) {
  cfg.RequireFiles({"checkpoint", "corpus"});
  cfg.CheckOptionalFiles({"lexicon"});
  const Checkpoint ckpt = LoadCheckpointFor(cfg);
  const Corpus corpus = LoadCorpus(*cfg.GetPath("corpus"), ckpt.labels);
  const TriggerLexicon lexicon = CheckpointLexicon(cfg, ckpt);
  const Dataset data = MakeDataset(corpus, lexicon, ckpt.candidates);
  const Corpus predicted = PredictCorpus(ckpt.model, data, EffectiveThreshold(cfg, ckpt));
  const auto explicit_out = cfg.GetPath("predictions");
  const fs::path out = explicit_out ? *explicit_out : cfg.ResolveRunDir() / "predictions.jsonl";
  SaveCorpus(predicted, out);
  std::cout << "predicted " << predicted.NuggetCount() << " nuggets in " << predicted.size()
            << " sentences\n"
            << "wrote " << out.string() << "\n";
  return 0;
}

int RunEvaluate(const RunConfig& cfg) {
  cfg.RequireFiles({"gold"});
  ScoreOptions options;
  options.span_only = cfg.GetBool("span_only");
  PRFReport report;
  if (cfg.GetPath("predictions")) {
    cfg.RequireFiles({"predictions"});
    LabelSet labels;
    if (auto ck = cfg.GetPath("checkpoint"); ck && cfg.Get("labels").empty()) {
      cfg.RequireFiles({"checkpoint"});
      labels = LoadCheckpoint(*ck).labels;
    } else {
      labels = cfg.Labels();
    }
    const Corpus gold = LoadCorpus(*cfg.GetPath("gold"), labels);
    const Corpus pred = LoadCorpus(*cfg.GetPath("predictions"), labels);
    if (gold.size() != pred.size()) {
      throw DataError("predictions have " + std::to_string(pred.size()) +
                      " sentences but gold has " + std::to_string(gold.size()));
    }
    report = Score(GoldMentions(pred), GoldMentions(gold), options);
  } else {
    cfg.RequireFiles({"checkpoint"});
    cfg.CheckOptionalFiles({"lexicon"});
    const Checkpoint ckpt = LoadCheckpointFor(cfg);
    const Corpus gold = LoadCorpus(*cfg.GetPath("gold"), ckpt.labels);
    const Dataset data = MakeDataset(gold, CheckpointLexicon(cfg, ckpt), ckpt.candidates);
    report = Score(PredictMentions(ckpt.model, data, EffectiveThreshold(cfg, ckpt)),
                   GoldMentions(gold), options);
  }
  const fs::path dir = cfg.ResolveRunDir();
  WriteOutput(dir, "report.json", report.ToJson().dump(2) + "\n");
  std::printf("tp=%zu pred=%zu gold=%zu\n", report.true_positives, report.predicted,
              report.gold);
  std::cout << FormatPRF(report) << "\n";
  return 0;
}

int RunGradCheck(const RunConfig& cfg) {
  TinyGradCheckOptions options;
  options.cell = ParseCellKind(cfg.Get("cell"));
  options.head = ParseHeadMode(cfg.Get("head"));
  options.use_branch = cfg.GetBool("use_branch");
  options.layers = cfg.GetInt("layers");
  options.seed = static_cast<uint64_t>(cfg.GetInt("seed"));
  const GradCheckResult result = GradCheckTinyModel(options);
  constexpr double kTolerance = 1e-4;
  const bool ok = result.max_rel_error < kTolerance;

  nlohmann::json j;
  j["cell"] = CellKindName(options.cell);
  j["head"] = HeadModeName(options.head);
  j["use_branch"] = options.use_branch;
  j["seed"] = options.seed;
  j["max_rel_error"] = result.max_rel_error;
  j["worst_tensor"] = result.worst_tensor;
  j["entries_checked"] = result.entries_checked;
  j["pass"] = ok;
  for (const auto& [name, err] : result.per_tensor) j["per_tensor"][name] = err;
  WriteOutput(cfg.ResolveRunDir(), "gradcheck.json", j.dump(2) + "\n");

  for (const auto& [name, err] : result.per_tensor) {
    std::printf("  %-24s %.3e\n", name.c_str(), err);
  }
  std::printf("max rel err %.3e (%s) over %zu entries: %s\n", result.max_rel_error,
              result.worst_tensor.c_str(), result.entries_checked, ok ? "PASS" : "FAIL");
  return ok ? 0 : 3;
}

int RunAblate(const RunConfig& cfg) {
  cfg.RequireFiles({"train"});
  cfg.CheckOptionalFiles({"dev", "embeddings", "paraphrases"});
  const LabelSet labels = cfg.Labels();
  TrainConfig tc = cfg.ToTrainConfig();
  tc.model.num_classes = labels.num_classes();
  tc.Validate();
  auto [train, dev] = LoadTrainDev(cfg, labels);
  if (!dev || dev->empty()) throw ConfigError("ablate needs a dev set (dev or dev_fraction)");
  const AblationGrid grid = RunAblation(train, *dev, MakePipelineInputs(cfg), tc);
  const fs::path dir = cfg.ResolveRunDir();
  WriteOutput(dir, "ablation.txt", grid.ToTable());
  WriteOutput(dir, "ablation.json", grid.ToJson().dump(2) + "\n");
  std::cout << grid.ToTable() << "wrote " << dir.string() << "\n";
  bool any_failed = false;
  for (const auto& cell : grid.cells) {
    if (!cell.report) any_failed = true;
  }
  return any_failed ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event nugget detection with forward-backward recurrent networks"};
  app.require_subcommand(1);
  const std::vector<std::string> data_keys = {"train", "dev", "dev_fraction", "labels",
                                              "embeddings", "paraphrases"};

  Command synth(app, "synth", "Generate a synthetic POS-tagged corpus",
                "Writes train.jsonl, dev.jsonl, labels.json and paraphrases.tsv.",
                {{"preset", "grammar", "sentences", "seed", "dev_fraction"}, kOutputKeys});
  Command lexicon(app, "build-lexicon", "Build the trigger lexicon from training gold",
                  "Requires: train, labels. Writes lexicon.tsv.",
                  {{"train", "labels", "paraphrases"}, kOutputKeys});
  Command candidates(
      app, "candidates", "Dump labeled candidates for a corpus",
      "Requires: corpus, labels, and lexicon or train. Writes candidates.jsonl.",
      {{"corpus", "labels", "lexicon", "train", "paraphrases", "max_nugget_len", "expand"},
       kOutputKeys});
  Command train(app, "train", "Train a model",
                "Requires: train, labels. Dev comes from dev or a dev_fraction split.\n"
                "Writes checkpoint.json, train_log.csv, lexicon.tsv, config.txt, "
                "dev_report.json.",
                {data_keys, kModelKeys, {"log_timing"}, kOutputKeys});
  Command predict(app, "predict", "Tag a corpus with a trained checkpoint",
                  "Requires: checkpoint, corpus. Writes predictions.jsonl (or predictions).",
                  {{"checkpoint", "corpus", "lexicon", "threshold", "predictions"},
                   kOutputKeys});
  Command evaluate(
      app, "evaluate", "Score predictions against gold",
      "Requires: gold plus predictions (with labels or checkpoint), or gold plus checkpoint.\n"
      "Writes report.json.",
      {{"gold", "predictions", "labels", "checkpoint", "lexicon", "threshold", "span_only"},
       kOutputKeys});
  Command gradcheck(app, "gradcheck",
                    "Finite-difference check of a random tiny model; exit 3 on failure",
                    "Writes gradcheck.json.",
                    {{"cell", "head", "use_branch", "layers", "seed"}, kOutputKeys});
  Command ablate(app, "ablate", "Train {LSTM, GRU} x {+branch, -branch} and compare on dev",
                 "Requires: train, labels, and dev or dev_fraction. Writes ablation.txt "
                 "and ablation.json.",
                 {data_keys, kModelKeys, kOutputKeys});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*synth.app()) return RunSynth(synth.Resolve());
    if (*lexicon.app()) return RunBuildLexicon(lexicon.Resolve());
    if (*candidates.app()) return RunCandidates(candidates.Resolve());
    if (*train.app()) return RunTrain(train.Resolve());
    if (*predict.app()) return RunPredict(predict.Resolve());
    if (*evaluate.app()) return RunEvaluate(evaluate.Resolve());
    if (*gradcheck.app()) return RunGradCheck(gradcheck.Resolve());
    if (*ablate.app()) return RunAblate(ablate.Resolve());
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
