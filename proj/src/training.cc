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

#include "fbrnn/training.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fbrnn/embeddings.h"
#include "fbrnn/errors.h"

namespace fbrnn {

namespace {

struct Example {
  EncodedExample input;
  std::vector<int> types;
  size_t sentence = 0;
  int start = 0;
  int end = 0;
};

std::vector<Example> EncodeDataset(const Fbrnn& model, const Dataset& data) {
  std::vector<Example> out;
  if (data.corpus == nullptr) return out;
  for (const auto& sc : data.candidates) {
    const Sentence& s = data.corpus->sentences.at(sc.sentence);
    for (const auto& c : sc.candidates) {
      out.push_back({model.Encode(s, c), c.types, sc.sentence, c.start, c.end});
    }
  }
  return out;
}

std::vector<std::vector<double>> SnapshotValues(const ParamStore& params) {
  std::vector<std::vector<double>> snap;
  snap.reserve(params.size());
  for (const auto& t : params) snap.push_back(t.values);
  return snap;
}

void RestoreValues(ParamStore& params, const std::vector<std::vector<double>>& snap) {
  for (size_t i = 0; i < params.size(); ++i) params.at(i).values = snap[i];
}

}  // namespace

void TrainConfig::Validate() const {
  model.Validate();
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid training config: " + what);
  };
  require(max_epochs >= 1, "max_epochs must be >= 1");
  require(patience >= 0, "patience must be >= 0");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(neg_keep > 0.0 && neg_keep <= 1.0, "neg_keep must be in (0, 1]");
  require(candidates.max_nugget_len >= 1, "max_nugget_len must be >= 1");
  require(threshold > 0.0 && threshold < 1.0, "threshold must be in (0, 1)");
  require(optimizer.adam.lr > 0.0 && optimizer.sgd_lr > 0.0, "learning rate must be positive");
  require(optimizer.adam.beta1 >= 0.0 && optimizer.adam.beta1 < 1.0, "beta1 must be in [0, 1)");
  require(optimizer.adam.beta2 >= 0.0 && optimizer.adam.beta2 < 1.0, "beta2 must be in [0, 1)");
  require(optimizer.adam.eps > 0.0, "eps must be positive");
}

size_t Dataset::CandidateCount() const {
  size_t n = 0;
  for (const auto& sc : candidates) n += sc.candidates.size();
  return n;
}

Dataset MakeDataset(const Corpus& corpus, const TriggerLexicon& lexicon,
                    const CandidateOptions& options) {
  return Dataset{&corpus, GenerateCandidates(corpus, lexicon, options)};
}

double TrainLog::best_dev_f1() const {
  for (const auto& e : epochs) {
    if (e.epoch == best_epoch) return e.dev.f1;
  }
  return 0.0;
}

std::string TrainLog::ToCsv(bool include_timing) const {
  std::string out = "epoch,loss,dev_p,dev_r,dev_f1,seconds\n";
  char buf[256];
  for (const auto& e : epochs) {
    std::snprintf(buf, sizeof(buf), "%d,%.12f,%.6f,%.6f,%.6f,", e.epoch, e.loss, e.dev.precision,
                  e.dev.recall, e.dev.f1);
    out += buf;
    if (include_timing) {
      std::snprintf(buf, sizeof(buf), "%.3f\n", e.seconds);
      out += buf;
    } else {
      out += "NA\n";
    }
  }
  return out;
}

std::string TrainLog::ToTable() const {
  std::string out = "epoch       loss   dev_P   dev_R  dev_F1    sec\n";
  char buf[256];
  for (const auto& e : epochs) {
    std::snprintf(buf, sizeof(buf), "%5d %10.6f %7.2f %7.2f %7.2f %6.2f%s\n", e.epoch, e.loss,
                  100.0 * e.dev.precision, 100.0 * e.dev.recall, 100.0 * e.dev.f1, e.seconds,
                  e.epoch == best_epoch ? "  *" : "");
    out += buf;
  }
  return out;
}

Rng InitRng(uint64_t seed) { return Rng(seed).Fork(); }

TrainLog Train(Fbrnn& model, const Dataset& train, const Dataset* dev, const TrainConfig& cfg) {
  cfg.Validate();
  const std::vector<Example> train_ex = EncodeDataset(model, train);
  if (train_ex.empty()) throw DataError("training set has no candidates");

  Rng root(cfg.seed);
  root.Fork();  // initialization stream, see InitRng
  Rng shuffle_rng = root.Fork();
  Rng dropout_rng = root.Fork();
  Rng sample_rng = root.Fork();

  TrainLog log;
  log.early_stopping = dev != nullptr && !dev->empty();
  if (!log.early_stopping) Warn("empty dev set: early stopping disabled");

  ParamStore& params = model.params();
  Optimizer optimizer(cfg.optimizer, params);
  std::vector<std::vector<double>> best_values;
  double best_f1 = -1.0;
  int since_best = 0;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<size_t> order;
    order.reserve(train_ex.size());
    for (size_t i = 0; i < train_ex.size(); ++i) {
      if (cfg.neg_keep < 1.0 && train_ex[i].types.empty() && sample_rng.Uniform() >= cfg.neg_keep) {
        continue;
      }
      order.push_back(i);
    }
    shuffle_rng.Shuffle(order);

    double total_loss = 0.0;
    int in_batch = 0;
    for (size_t k = 0; k < order.size(); ++k) {
      const Example& ex = train_ex[order[k]];
      if (in_batch == 0) params.ZeroGrad();
      try {
        total_loss += model.ForwardBackward(ex.input, ex.types, Mode::kTrain, dropout_rng);
      } catch (const NumericError& e) {
        throw NumericError("epoch " + std::to_string(epoch) + ", example " +
                           std::to_string(k + 1) + " (sentence " + std::to_string(ex.sentence + 1) +
                           ", span " + std::to_string(ex.start) + "-" + std::to_string(ex.end) +
                           "): " + e.what());
      }
      ++in_batch;
      if (in_batch == cfg.batch_size || k + 1 == order.size()) {
        if (in_batch > 1) {
          const double scale = 1.0 / in_batch;
          for (auto& t : params) {
            for (double& g : t.grad) g *= scale;
          }
        }
        optimizer.Step(params);
        in_batch = 0;
      }
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.loss = order.empty() ? 0.0 : total_loss / static_cast<double>(order.size());
    if (!std::isfinite(entry.loss)) {
      throw NumericError("epoch " + std::to_string(epoch) + ": non-finite training loss");
    }
    if (log.early_stopping) entry.dev = Evaluate(model, *dev, cfg.threshold);
    entry.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log.epochs.push_back(entry);

    if (!log.early_stopping) {
      log.best_epoch = epoch;
      continue;
    }
    if (entry.dev.f1 > best_f1) {
      best_f1 = entry.dev.f1;
      log.best_epoch = epoch;
      best_values = SnapshotValues(params);
      since_best = 0;
    } else {
      ++since_best;
    }
    if (since_best >= cfg.patience) break;
  }
  if (log.early_stopping) RestoreValues(params, best_values);
  return log;
}

std::vector<Mention> PredictMentions(const Fbrnn& model, const Dataset& data, double threshold) {
  std::vector<Mention> out;
  if (data.corpus == nullptr) return out;
  for (const auto& sc : data.candidates) {
    const Sentence& s = data.corpus->sentences.at(sc.sentence);
    for (const auto& c : sc.candidates) {
      for (int t : model.Predict(model.Encode(s, c), threshold)) {
        out.push_back({sc.sentence, c.start, c.end, t});
      }
    }
  }
  return out;
}

PRFReport Evaluate(const Fbrnn& model, const Dataset& data, double threshold) {
  if (data.corpus == nullptr) return {};
  return Score(PredictMentions(model, data, threshold), GoldMentions(*data.corpus));
}

Corpus PredictCorpus(const Fbrnn& model, const Dataset& data, double threshold) {
  Corpus out = *data.corpus;
  for (auto& s : out.sentences) s.nuggets.clear();
  for (const auto& sc : data.candidates) {
    Sentence& s = out.sentences.at(sc.sentence);
    for (const auto& c : sc.candidates) {
      auto types = model.Predict(model.Encode(data.corpus->sentences[sc.sentence], c), threshold);
      if (!types.empty()) s.nuggets.push_back({c.start, c.end, std::move(types)});
    }
  }
  return out;
}

PipelineResult TrainPipeline(const Corpus& train, const Corpus* dev,
                             const PipelineInputs& inputs, TrainConfig cfg) {
  cfg.model.num_classes = train.labels.num_classes();
  cfg.Validate();
  if (dev && !(dev->labels == train.labels)) {
    throw ConfigError("train and dev corpora use different label sets");
  }
  PipelineResult result;
  result.lexicon = BuildTriggerLexicon(train, inputs.paraphrases);
  Dataset train_data = MakeDataset(train, result.lexicon, cfg.candidates);
  std::optional<Dataset> dev_data;
  if (dev) dev_data = MakeDataset(*dev, result.lexicon, cfg.candidates);

  Rng init = InitRng(cfg.seed);
  Vocabulary vocab = Vocabulary::FromCorpus(train);
  WordTable words = inputs.embeddings
                        ? LoadPretrained(*inputs.embeddings, std::move(vocab), cfg.model.word_dim, init)
                        : RandomWordTable(std::move(vocab), cfg.model.word_dim, init);
  result.embedding_stats = words.stats;
  result.model = Fbrnn(cfg.model, std::move(words), init);
  result.log = Train(result.model, train_data, dev_data ? &*dev_data : nullptr, cfg);
  return result;
}

}  // namespace fbrnn
