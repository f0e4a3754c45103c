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

#ifndef FBRNN_SYNTHETIC_H_
#define FBRNN_SYNTHETIC_H_

// Template-driven generator of POS-tagged sentences with gold nuggets.
//
// A pattern is a whitespace-separated list of items:
//   word/POS     a literal token
//   @NAME        a phrase drawn uniformly from filler class NAME
//   {a/VB b/IN}  braces wrap the gold nugget (may span several items)
// e.g. "@PERSON had/VBD {broken/VBN into/IN} @PLACE @TIME".
// Filler phrases use the same word/POS syntax without braces or slots.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fbrnn/corpus.h"
#include "fbrnn/numerics.h"

namespace fbrnn {

struct FillerClass {
  std::string name;
  std::vector<std::string> phrases;
};

struct EventTemplate {
  // Event types of the bracketed nugget; empty for a non-event sentence.
  std::vector<std::string> types;
  double weight = 1.0;
  std::vector<std::string> patterns;
};

struct SyntheticGrammar {
  std::vector<FillerClass> fillers;
  std::vector<EventTemplate> templates;
  // Stand-in paraphrase pairs shipped alongside the corpus.
  std::vector<std::pair<std::string, std::string>> paraphrases;
};

// Five event types, single- and multi-token (verb + particle/preposition)
// nuggets, plus non-event distractor sentences that reuse trigger words.
SyntheticGrammar DefaultGrammar();

// One trigger word whose event type is decided only by where it sits in a
// fixed-length sentence of interchangeable filler nouns.
SyntheticGrammar PositionalGrammar();

// JSON: {"fillers":{"NAME":["w/P ..."]},
//        "templates":[{"types":["A"],"weight":1,"patterns":["..."]}],
//        "paraphrases":[["src","para"]]}
SyntheticGrammar LoadGrammar(const std::filesystem::path& path);

// Event types in order of first appearance across templates.
LabelSet GrammarLabels(const SyntheticGrammar& grammar);

// Draws `count` sentences: a template by weight, then one of its patterns
// uniformly, then each filler slot uniformly. Throws ConfigError on an
// empty template list or a malformed pattern.
Corpus MakeSyntheticCorpus(const SyntheticGrammar& grammar, size_t count, Rng& rng);

std::string ParaphrasesToTsv(const SyntheticGrammar& grammar);

}  // namespace fbrnn

#endif  // FBRNN_SYNTHETIC_H_
