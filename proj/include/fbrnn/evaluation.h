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

#ifndef FBRNN_EVALUATION_H_
#define FBRNN_EVALUATION_H_

// Span-level micro precision/recall/F1 over (sentence, span, type)
// triples.

#include <string>
#include <vector>

#include "fbrnn/corpus.h"
#include "json.hpp"

namespace fbrnn {

struct Mention {
  size_t sentence = 0;
  int start = 0;
  int end = 0;
  int type = 0;  // event class id, never NON_EVENT

  auto operator<=>(const Mention&) const = default;
};

struct PRFReport {
  size_t true_positives = 0;
  size_t predicted = 0;
  size_t gold = 0;
  size_t duplicates_removed = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  // {"tp":..,"pred":..,"gold":..,"p":..,"r":..,"f1":..}
  nlohmann::json ToJson() const;
};

struct ScoreOptions {
  // Ignore types: a prediction matches on span alone.
  bool span_only = false;
};

// One gold triple per type of every gold nugget.
std::vector<Mention> GoldMentions(const Corpus& corpus);

// Micro counts. Identical predicted triples are counted once (with a
// warning); precision is 0 with no predictions, recall 0 with no gold.
PRFReport Score(std::vector<Mention> predicted, std::vector<Mention> gold,
                const ScoreOptions& options = {});

PRFReport MakeReport(size_t tp, size_t predicted, size_t gold);

// Harmonic mean of two percentages, rounded to `decimals` places;
// 0 when p + r == 0.
double F1Percent(double p, double r, int decimals = 2);

// "P=66.80 R=68.00 F1=67.39" style line with percentages.
std::string FormatPRF(const PRFReport& report, int decimals = 2);

}  // namespace fbrnn

#endif  // FBRNN_EVALUATION_H_
