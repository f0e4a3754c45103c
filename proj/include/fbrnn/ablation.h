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

#ifndef FBRNN_ABLATION_H_
#define FBRNN_ABLATION_H_

// {LSTM, GRU} x {+branch, -branch} dev-set comparison.

#include <array>
#include <optional>
#include <string>

#include "fbrnn/corpus.h"
#include "fbrnn/evaluation.h"
#include "fbrnn/model.h"
#include "fbrnn/training.h"
#include "json.hpp"

namespace fbrnn {

struct AblationCell {
  CellKind cell = CellKind::kGru;
  bool use_branch = true;
  std::optional<PRFReport> report;
  std::string error;  // set when this configuration failed to train
};

struct AblationGrid {
  // LSTM+branch, LSTM-branch, GRU+branch, GRU-branch.
  std::array<AblationCell, 4> cells;

  const AblationCell& at(CellKind cell, bool use_branch) const;
  // Four rows with P, R, F1 in percent.
  std::string ToTable() const;
  nlohmann::json ToJson() const;
};

// Trains every configuration from `base` with the same seed and scores it
// on `dev`. A failing configuration is reported and the rest still run.
AblationGrid RunAblation(const Corpus& train, const Corpus& dev, const PipelineInputs& inputs,
                         const TrainConfig& base);

}  // namespace fbrnn

#endif  // FBRNN_ABLATION_H_
