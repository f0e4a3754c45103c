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

#ifndef FBRNN_CHECKPOINT_H_
#define FBRNN_CHECKPOINT_H_

// Self-describing JSON checkpoint: format tag and version, model config,
// label set, vocabulary, optional trigger lexicon and candidate settings,
// and every named tensor with its shape and row-major values. Doubles are
// written in shortest round-trip form, so a reload is bit-exact.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "fbrnn/candidates.h"
#include "fbrnn/corpus.h"
#include "fbrnn/model.h"

namespace fbrnn {

inline constexpr std::string_view kCheckpointFormat = "fbrnn-checkpoint";
inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  Fbrnn model;
  LabelSet labels;
  std::optional<TriggerLexicon> lexicon;
  CandidateOptions candidates;
  double threshold = 0.5;
};

std::string CheckpointToJson(const Checkpoint& ckpt);
void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt);

// Throws DataError for unreadable/truncated files or a tensor whose name
// or shape disagrees with the stored config, and ConfigError when
// `expected` is given and its architecture differs from the stored one.
Checkpoint CheckpointFromJson(std::string_view text, const std::string& source,
                              const ModelConfig* expected = nullptr);
Checkpoint LoadCheckpoint(const std::filesystem::path& path,
                          const ModelConfig* expected = nullptr);

}  // namespace fbrnn

#endif  // FBRNN_CHECKPOINT_H_
