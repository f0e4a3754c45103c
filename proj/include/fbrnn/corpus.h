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

#ifndef FBRNN_CORPUS_H_
#define FBRNN_CORPUS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fbrnn/numerics.h"
#include "json.hpp"

namespace fbrnn {

// Event-type inventory. Class 0 is always NON_EVENT; event type i of the
// list is class i + 1, so num_classes() == event_types().size() + 1.
class LabelSet {
 public:
  static constexpr int kNonEvent = 0;
  static constexpr std::string_view kNonEventName = "NON_EVENT";

  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> event_types);

  // 33 ACE 2005 subtypes (34 classes) and 38 Rich ERE 2015 subtypes
  // (39 classes), named "Type.Subtype".
  static LabelSet Ace2005();
  static LabelSet RichEre2015();

  // JSON array of type strings. NON_EVENT must not appear.
  static LabelSet Load(const std::filesystem::path& path);
  std::string ToJson() const;

  int num_classes() const { return static_cast<int>(event_types_.size()) + 1; }
  int num_types() const { return static_cast<int>(event_types_.size()); }
  const std::vector<std::string>& event_types() const { return event_types_; }

  std::optional<int> Find(std::string_view name) const;
  const std::string& Name(int class_id) const;

  bool operator==(const LabelSet& other) const = default;

 private:
  std::vector<std::string> event_types_;
};

struct Token {
  std::string text;
  std::optional<std::string> pos;

  bool operator==(const Token&) const = default;
};

// Inclusive token span with a sorted, duplicate-free set of event classes
// (each >= 1). More than one class marks a multi-label mention.
struct GoldNugget {
  int start = 0;
  int end = 0;
  std::vector<int> types;

  bool operator==(const GoldNugget&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<GoldNugget> nuggets;

  int size() const { return static_cast<int>(tokens.size()); }
  bool HasPos() const;

  bool operator==(const Sentence&) const = default;
};

struct Corpus {
  LabelSet labels;
  std::vector<Sentence> sentences;

  size_t size() const { return sentences.size(); }
  bool empty() const { return sentences.empty(); }
  size_t NuggetCount() const;

  bool operator==(const Corpus&) const = default;
};

// Normalizes a type list to the canonical sorted unique form.
std::vector<int> CanonicalTypes(std::vector<int> types);

// Checks the span and type invariants; `where` prefixes error messages.
void ValidateSentence(const Sentence& s, const LabelSet& labels, const std::string& where);

nlohmann::json SentenceToJson(const Sentence& s, const LabelSet& labels);
Sentence SentenceFromJson(const nlohmann::json& j, const LabelSet& labels,
                          const std::string& where);

// One sentence per line:
// {"tokens":[{"t":"broken","pos":"VBN"},...],
//  "nuggets":[{"start":4,"end":5,"types":["Conflict.Attack"]}]}
// Blank lines are ignored. Errors name the file, line and field.
Corpus ParseCorpus(std::string_view text, const LabelSet& labels,
                   const std::string& source = "<memory>");
Corpus LoadCorpus(const std::filesystem::path& path, const LabelSet& labels);
std::string CorpusToJsonLines(const Corpus& corpus);
void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path);

// Seeded shuffle of sentence order, then the first round(n * dev_fraction)
// sentences become the dev set. Returns {train, dev}.
std::pair<Corpus, Corpus> SplitCorpus(const Corpus& corpus, double dev_fraction, Rng& rng);

}  // namespace fbrnn

#endif  // FBRNN_CORPUS_H_
