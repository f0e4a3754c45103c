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

#include "fbrnn/embeddings.h"

#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "fbrnn/errors.h"
#include "fbrnn/io.h"

namespace fbrnn {

Vocabulary::Vocabulary() {
  words_.emplace_back(kUnkToken);
  index_.emplace(std::string(kUnkToken), kUnk);
}

Vocabulary Vocabulary::FromCorpus(const Corpus& corpus) {
  Vocabulary v;
  for (const auto& s : corpus.sentences) {
    for (const auto& t : s.tokens) v.Add(t.text);
  }
  return v;
}

Vocabulary Vocabulary::FromWords(const std::vector<std::string>& words) {
  if (words.empty() || words[0] != kUnkToken) {
    throw DataError("vocabulary must start with the UNK token");
  }
  Vocabulary v;
  for (size_t i = 1; i < words.size(); ++i) {
    if (v.Contains(words[i]) || words[i] != ToLower(words[i])) {
      throw DataError("vocabulary entry '" + words[i] + "' is duplicated or not lowercased");
    }
    v.Add(words[i]);
  }
  return v;
}

int Vocabulary::Add(std::string_view word) {
  std::string key = ToLower(word);
  auto [it, inserted] = index_.try_emplace(key, static_cast<int>(words_.size()));
  if (inserted) words_.push_back(std::move(key));
  return it->second;
}

int Vocabulary::Lookup(std::string_view word) const {
  auto it = index_.find(ToLower(word));
  return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::Contains(std::string_view word) const {
  return index_.count(ToLower(word)) > 0;
}

WordTable RandomWordTable(Vocabulary vocab, int dim, Rng& rng) {
  if (dim < 1) throw ConfigError("word_dim must be >= 1");
  WordTable table;
  table.vocab = std::move(vocab);
  const size_t rows = table.vocab.size();
  table.matrix = Tensor(kWordTableName, {rows, static_cast<size_t>(dim)});
  for (size_t r = 0; r < rows; ++r) {
    Tensor row = InitUniformScaled("row", {1, static_cast<size_t>(dim)}, rng);
    std::copy(row.values.begin(), row.values.end(), table.matrix.row(r).begin());
  }
  table.stats.oov.assign(rows, true);
  table.stats.oov_rows = rows;
  return table;
}

WordTable ParsePretrained(std::string_view text, const std::string& source, Vocabulary vocab,
                          int dim, Rng& rng) {
  WordTable table = RandomWordTable(std::move(vocab), dim, rng);
  const auto lines = SplitLines(text);
  size_t li = 0;
  while (li < lines.size() && Trim(lines[li]).empty()) ++li;
  if (li == lines.size()) throw DataError(source + ": empty embedding file");
  long declared_rows = 0, declared_dim = 0;
  {
    std::istringstream header{lines[li]};
    std::string extra;
    if (!(header >> declared_rows >> declared_dim) || (header >> extra)) {
      throw DataError(source + ":" + std::to_string(li + 1) + ": header must be 'V d'");
    }
  }
  if (declared_dim != dim) {
    throw DataError(source + ": embedding dimension " + std::to_string(declared_dim) +
                    " does not match configured word_dim " + std::to_string(dim));
  }
  std::unordered_set<int> filled;
  long rows_read = 0;
  std::vector<double> vec(dim);
  for (++li; li < lines.size(); ++li) {
    std::string_view line = Trim(lines[li]);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(li + 1);
    const size_t sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos) throw DataError(where + ": missing vector values");
    const std::string_view word = line.substr(0, sp);
    const char* p = line.data() + sp;
    const char* end = line.data() + line.size();
    for (int k = 0; k < dim; ++k) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      auto [next, ec] = std::from_chars(p, end, vec[k]);
      if (ec != std::errc() || !std::isfinite(vec[k])) {
        throw DataError(where + ": value " + std::to_string(k + 1) + " is not a number");
      }
      p = next;
    }
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (p != end) throw DataError(where + ": more than " + std::to_string(dim) + " values");
    ++rows_read;
    if (!table.vocab.Contains(word)) continue;
    const int id = table.vocab.Lookup(word);
    if (id == Vocabulary::kUnk || !filled.insert(id).second) continue;
    std::copy(vec.begin(), vec.end(), table.matrix.row(id).begin());
    table.stats.oov[id] = false;
  }
  if (rows_read != declared_rows) {
    Warn(source + ": header declares " + std::to_string(declared_rows) + " rows, read " +
         std::to_string(rows_read));
  }
  table.stats.pretrained_rows = filled.size();
  table.stats.oov_rows = table.vocab.size() - filled.size();
  return table;
}

WordTable LoadPretrained(const std::filesystem::path& path, Vocabulary vocab, int dim,
                         Rng& rng) {
  return ParsePretrained(ReadFile(path), path.string(), std::move(vocab), dim, rng);
}

Tensor MakeBranchTable(int dim, Rng& rng) {
  if (dim < 1) throw ConfigError("branch_dim must be >= 1");
  return InitUniformScaled(kBranchTableName, {3, static_cast<size_t>(dim)}, rng);
}

InputLayer::InputLayer(size_t word_param, std::optional<size_t> branch_param, int word_dim,
                       int branch_dim)
    : word_param_(word_param),
      branch_param_(branch_param),
      word_dim_(word_dim),
      branch_dim_(branch_dim) {}

std::vector<double> InputLayer::Assemble(const ParamStore& params, int word_id,
                                         Branch branch) const {
  std::vector<double> x;
  x.reserve(width());
  auto word = params.at(word_param_).row(static_cast<size_t>(word_id));
  x.insert(x.end(), word.begin(), word.end());
  if (branch_param_) {
    auto b = params.at(*branch_param_).row(static_cast<size_t>(branch));
    x.insert(x.end(), b.begin(), b.end());
  }
  return x;
}

void InputLayer::Backward(ParamStore& params, int word_id, Branch branch,
                          std::span<const double> grad) const {
  auto word = params.at(word_param_).grad_row(static_cast<size_t>(word_id));
  for (int k = 0; k < word_dim_; ++k) word[k] += grad[k];
  if (branch_param_) {
    auto b = params.at(*branch_param_).grad_row(static_cast<size_t>(branch));
    for (int k = 0; k < branch_dim_; ++k) b[k] += grad[word_dim_ + k];
  }
}

}  // namespace fbrnn
