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

#ifndef FBRNN_CANDIDATES_H_
#define FBRNN_CANDIDATES_H_

// High-recall candidate generation: a trigger lexicon from training gold
// plus paraphrases, single-token lookup, POS-driven multi-token expansion,
// gold alignment and the left/nugget/right split consumed by the model.

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fbrnn/corpus.h"

namespace fbrnn {

class TriggerLexicon {
 public:
  struct Entry {
    int train_count = 0;
    int paraphrase_count = 0;
    bool operator==(const Entry&) const = default;
  };

  // Words are lowercased on insertion and lookup.
  void AddTrain(std::string_view word);
  void AddParaphrase(std::string_view word);
  bool Contains(std::string_view word) const;

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, Entry, std::less<>>& entries() const { return entries_; }

  // "word<TAB>train_count<TAB>paraphrase_count" per line, '#' comments.
  std::string ToTsv() const;
  static TriggerLexicon FromTsv(std::string_view text, const std::string& source);
  static TriggerLexicon Load(const std::filesystem::path& path);

  bool operator==(const TriggerLexicon&) const = default;

 private:
  std::map<std::string, Entry, std::less<>> entries_;
};

// `source<TAB>paraphrase` pairs; blank lines and '#' comments skipped.
std::vector<std::pair<std::string, std::string>> ParseParaphrases(std::string_view text,
                                                                  const std::string& source);
std::vector<std::pair<std::string, std::string>> LoadParaphrases(
    const std::filesystem::path& path);

// The first token of every gold nugget, plus every paraphrase whose source
// is one of those tokens. A multi-token paraphrase contributes its first
// token. No frequency cutoff.
TriggerLexicon BuildTriggerLexicon(
    const Corpus& train, const std::vector<std::pair<std::string, std::string>>& paraphrases);
TriggerLexicon BuildTriggerLexicon(const Corpus& train,
                                   const std::optional<std::filesystem::path>& paraphrase_file);

// Inclusive span within one sentence. An empty `types` is NON_EVENT.
struct NuggetCandidate {
  int start = 0;
  int end = 0;
  std::vector<int> types;

  int length() const { return end - start + 1; }
  bool IsEvent() const { return !types.empty(); }
  bool operator==(const NuggetCandidate&) const = default;
};

std::vector<NuggetCandidate> ExtractSingleTokenCandidates(const Sentence& s,
                                                          const TriggerLexicon& lexicon);

// Keeps every input candidate. For each length-1 candidate on a verbal
// token (POS prefix "VB"), also emits the spans formed by appending up to
// max_len - 1 following tokens while each appended token is tagged RP or
// IN. Output is sorted by (start, end) without duplicates. Throws
// DataError if the sentence lacks POS tags.
std::vector<NuggetCandidate> ExpandCandidates(const Sentence& s,
                                              const std::vector<NuggetCandidate>& candidates,
                                              int max_len);

struct AlignStats {
  int merged_gold = 0;
};

// A candidate whose span equals a gold span gets that nugget's types;
// every other candidate becomes NON_EVENT. Gold nuggets sharing a span
// are merged into one type set (counted in stats, with a warning).
std::vector<NuggetCandidate> AlignLabels(std::vector<NuggetCandidate> candidates,
                                         const std::vector<GoldNugget>& gold,
                                         AlignStats* stats = nullptr);

enum class Branch { kLeft = 0, kNugget = 1, kRight = 2 };
std::string_view BranchName(Branch b);

// Views into the sentence; left + nugget + right == sentence tokens.
struct BranchSplit {
  std::span<const Token> left;
  std::span<const Token> nugget;
  std::span<const Token> right;
};

BranchSplit SplitBranches(const Sentence& s, const NuggetCandidate& c);

struct CandidateOptions {
  int max_nugget_len = 3;
  bool expand = true;
};

struct SentenceCandidates {
  size_t sentence = 0;
  std::vector<NuggetCandidate> candidates;
};

// Runs extraction, optional expansion and gold alignment for every
// sentence of the corpus.
std::vector<SentenceCandidates> GenerateCandidates(const Corpus& corpus,
                                                   const TriggerLexicon& lexicon,
                                                   const CandidateOptions& options);

struct CandidateCoverage {
  size_t candidates = 0;
  size_t positives = 0;
  size_t gold = 0;
  size_t gold_covered = 0;  // gold spans matched exactly by some candidate
};
CandidateCoverage MeasureCoverage(const Corpus& corpus,
                                  const std::vector<SentenceCandidates>& candidates);

// Corpus schema per sentence plus
// "candidates":[{"start":..,"end":..,"label":["Type"] or ["NON_EVENT"]}].
std::string CandidatesToJsonLines(const Corpus& corpus,
                                  const std::vector<SentenceCandidates>& candidates);

}  // namespace fbrnn

#endif  // FBRNN_CANDIDATES_H_
