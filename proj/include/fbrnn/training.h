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

#ifndef FBRNN_TRAINING_H_
#define FBRNN_TRAINING_H_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fbrnn/candidates.h"
#include "fbrnn/corpus.h"
#include "fbrnn/evaluation.h"
#include "fbrnn/model.h"
#include "fbrnn/numerics.h"

namespace fbrnn {

struct TrainConfig {
  ModelConfig model;
  OptimizerConfig optimizer;
  int max_epochs = 50;
  // Stop once this many consecutive epochs bring no dev-F1 improvement.
  int patience = 5;
  uint64_t seed = 1;
  // Examples whose gradients are averaged into one optimizer step.
  int batch_size = 1;
  // Probability of keeping each NON_EVENT example in an epoch.
  double neg_keep = 1.0;
  CandidateOptions candidates;
  double threshold = 0.5;

  void Validate() const;
};

// Candidates of a corpus. The corpus must outlive the dataset.
struct Dataset {
  const Corpus* corpus = nullptr;
  std::vector<SentenceCandidates> candidates;

  size_t CandidateCount() const;
  bool empty() const { return corpus == nullptr || corpus->empty(); }
};

Dataset MakeDataset(const Corpus& corpus, const TriggerLexicon& lexicon,
                    const CandidateOptions& options);

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;  // mean per-example training loss
  PRFReport dev;
  double seconds = 0.0;
};

struct TrainLog {
  std::vector<EpochLog> epochs;
  int best_epoch = 0;
  bool early_stopping = true;

  double best_dev_f1() const;
  // epoch,loss,dev_p,dev_r,dev_f1,seconds. Without timing the seconds
  // column is "NA", which keeps the file a pure function of inputs.
  std::string ToCsv(bool include_timing = false) const;
  std::string ToTable() const;
};

// The generator used for parameter initialization under `seed`. Train()
// draws its shuffling, dropout and negative sampling from sibling streams.
Rng InitRng(uint64_t seed);

// Per-example (or per-batch) updates with seeded shuffling and dropout;
// dev micro-F1 after each epoch; early stopping with `patience`. On return
// the model holds the parameters of the best dev epoch. With a null or
// empty dev set early stopping is disabled (with a warning) and the final
// epoch is kept.
TrainLog Train(Fbrnn& model, const Dataset& train, const Dataset* dev, const TrainConfig& cfg);

std::vector<Mention> PredictMentions(const Fbrnn& model, const Dataset& data, double threshold);
PRFReport Evaluate(const Fbrnn& model, const Dataset& data, double threshold);
// Copy of the dataset's corpus with nuggets replaced by predictions.
Corpus PredictCorpus(const Fbrnn& model, const Dataset& data, double threshold);

struct PipelineInputs {
  std::vector<std::pair<std::string, std::string>> paraphrases;
  std::optional<std::filesystem::path> embeddings;
};

struct PipelineResult {
  TriggerLexicon lexicon;
  Fbrnn model;
  TrainLog log;
  EmbeddingStats embedding_stats;
};

// Lexicon, candidates, vocabulary and model construction followed by
// Train(). cfg.model.num_classes is taken from the training labels.
PipelineResult TrainPipeline(const Corpus& train, const Corpus* dev,
                             const PipelineInputs& inputs, TrainConfig cfg);

}  // namespace fbrnn

#endif  // FBRNN_TRAINING_H_
