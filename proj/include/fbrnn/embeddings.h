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

#ifndef FBRNN_EMBEDDINGS_H_
#define FBRNN_EMBEDDINGS_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fbrnn/candidates.h"
#include "fbrnn/corpus.h"
#include "fbrnn/numerics.h"

namespace fbrnn {

// Lowercased word -> row index. Row 0 is the shared UNK row.
class Vocabulary {
 public:
  static constexpr int kUnk = 0;
  static constexpr std::string_view kUnkToken = "<unk>";

  Vocabulary();
  // Every training word in order of first appearance.
  static Vocabulary FromCorpus(const Corpus& corpus);
  // Rebuilds from a saved word list; words[0] must be the UNK token.
  static Vocabulary FromWords(const std::vector<std::string>& words);

  int Add(std::string_view word);
  int Lookup(std::string_view word) const;
  bool Contains(std::string_view word) const;

  size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

struct EmbeddingStats {
  size_t pretrained_rows = 0;
  size_t oov_rows = 0;  // includes UNK
  std::vector<bool> oov;
};

struct WordTable {
  Vocabulary vocab;
  Tensor matrix;  // [V x d_w], named "embed.word"
  EmbeddingStats stats;

  int dim() const { return static_cast<int>(matrix.cols()); }
};

inline constexpr const char* kWordTableName = "embed.word";
inline constexpr const char* kBranchTableName = "embed.branch";

// Rows drawn independently from InitUniformScaled over shape [1 x dim].
WordTable RandomWordTable(Vocabulary vocab, int dim, Rng& rng);

// word2vec text format: header "V d", then "word v_1 ... v_d" per line.
// File words are lowercased; the first occurrence of a lowercased word
// wins. Vocabulary words missing from the file, and UNK, keep their random
// initialization and are flagged OOV.
WordTable ParsePretrained(std::string_view text, const std::string& source, Vocabulary vocab,
                          int dim, Rng& rng);
WordTable LoadPretrained(const std::filesystem::path& path, Vocabulary vocab, int dim, Rng& rng);

// [3 x d_b], rows indexed by Branch.
Tensor MakeBranchTable(int dim, Rng& rng);

// Builds per-token encoder inputs [word_row ; branch_row] and routes their
// gradients back into the two tables.
class InputLayer {
 public:
  InputLayer() = default;
  InputLayer(size_t word_param, std::optional<size_t> branch_param, int word_dim,
             int branch_dim);

  int width() const { return word_dim_ + (branch_param_ ? branch_dim_ : 0); }
  bool has_branch() const { return branch_param_.has_value(); }

  std::vector<double> Assemble(const ParamStore& params, int word_id, Branch branch) const;
  void Backward(ParamStore& params, int word_id, Branch branch,
                std::span<const double> grad) const;

 private:
  size_t word_param_ = 0;
  std::optional<size_t> branch_param_;
  int word_dim_ = 0;
  int branch_dim_ = 0;
};

}  // namespace fbrnn

#endif  // FBRNN_EMBEDDINGS_H_
