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

#include "fbrnn/candidates.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "fbrnn/errors.h"
#include "fbrnn/io.h"

namespace fbrnn {

using nlohmann::json;

void TriggerLexicon::AddTrain(std::string_view word) {
  ++entries_[ToLower(word)].train_count;
}

void TriggerLexicon::AddParaphrase(std::string_view word) {
  ++entries_[ToLower(word)].paraphrase_count;
}

bool TriggerLexicon::Contains(std::string_view word) const {
  return entries_.find(ToLower(word)) != entries_.end();
}

std::string TriggerLexicon::ToTsv() const {
  std::string out = "# word\ttrain_count\tparaphrase_count\n";
  for (const auto& [word, e] : entries_) {
    out += word + "\t" + std::to_string(e.train_count) + "\t" +
           std::to_string(e.paraphrase_count) + "\n";
  }
  return out;
}

TriggerLexicon TriggerLexicon::FromTsv(std::string_view text, const std::string& source) {
  TriggerLexicon lex;
  const auto lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = Trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    std::istringstream in{std::string(line)};
    std::string word;
    Entry e;
    if (!(in >> word >> e.train_count >> e.paraphrase_count)) {
      throw DataError(source + ":" + std::to_string(i + 1) +
                      ": expected word<TAB>train_count<TAB>paraphrase_count");
    }
    lex.entries_[ToLower(word)] = e;
  }
  return lex;
}

TriggerLexicon TriggerLexicon::Load(const std::filesystem::path& path) {
  return FromTsv(ReadFile(path), path.string());
}

std::vector<std::pair<std::string, std::string>> ParseParaphrases(std::string_view text,
                                                                  const std::string& source) {
  std::vector<std::pair<std::string, std::string>> pairs;
  const auto lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = Trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(source + ":" + std::to_string(i + 1) +
                      ": expected source<TAB>paraphrase");
    }
    std::string_view src = Trim(line.substr(0, tab));
    std::string_view para = Trim(line.substr(tab + 1));
    if (src.empty() || para.empty()) {
      throw DataError(source + ":" + std::to_string(i + 1) + ": empty paraphrase field");
    }
    pairs.emplace_back(ToLower(src), ToLower(para));
  }
  return pairs;
}

std::vector<std::pair<std::string, std::string>> LoadParaphrases(
    const std::filesystem::path& path) {
  return ParseParaphrases(ReadFile(path), path.string());
}

TriggerLexicon BuildTriggerLexicon(
    const Corpus& train, const std::vector<std::pair<std::string, std::string>>& paraphrases) {
  TriggerLexicon lex;
  if (train.empty()) Warn("empty training corpus: trigger lexicon is empty");
  for (const auto& s : train.sentences) {
    for (const auto& n : s.nuggets) lex.AddTrain(s.tokens[n.start].text);
  }
  std::set<std::string> train_words;
  for (const auto& [word, e] : lex.entries()) train_words.insert(word);
  for (const auto& [src, para] : paraphrases) {
    if (!train_words.count(src)) continue;
    const std::string head = para.substr(0, para.find_first_of(" \t"));
    lex.AddParaphrase(head);
  }
  return lex;
}

TriggerLexicon BuildTriggerLexicon(const Corpus& train,
                                   const std::optional<std::filesystem::path>& paraphrase_file) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (paraphrase_file) pairs = LoadParaphrases(*paraphrase_file);
  return BuildTriggerLexicon(train, pairs);
}

std::vector<NuggetCandidate> ExtractSingleTokenCandidates(const Sentence& s,
                                                          const TriggerLexicon& lexicon) {
  std::vector<NuggetCandidate> out;
  for (int i = 0; i < s.size(); ++i) {
    if (lexicon.Contains(s.tokens[i].text)) out.push_back({i, i, {}});
  }
  return out;
}

std::vector<NuggetCandidate> ExpandCandidates(const Sentence& s,
                                              const std::vector<NuggetCandidate>& candidates,
                                              int max_len) {
  if (max_len < 1) throw ConfigError("max_nugget_len must be >= 1");
  if (!s.HasPos()) {
    throw DataError(
        "candidate expansion needs POS tags on every token; supply \"pos\" fields or "
        "disable expansion (expand = false)");
  }
  std::vector<NuggetCandidate> out = candidates;
  for (const auto& c : candidates) {
    if (c.length() != 1) continue;
    if (s.tokens[c.start].pos->rfind("VB", 0) != 0) continue;
    for (int end = c.start + 1; end < s.size() && end - c.start + 1 <= max_len; ++end) {
      const std::string& pos = *s.tokens[end].pos;
      if (pos != "RP" && pos != "IN") break;
      out.push_back({c.start, end, {}});
    }
  }
  std::sort(out.begin(), out.end(), [](const NuggetCandidate& a, const NuggetCandidate& b) {
    return std::tie(a.start, a.end) < std::tie(b.start, b.end);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const NuggetCandidate& a, const NuggetCandidate& b) {
                          return a.start == b.start && a.end == b.end;
                        }),
            out.end());
  return out;
}

std::vector<NuggetCandidate> AlignLabels(std::vector<NuggetCandidate> candidates,
                                         const std::vector<GoldNugget>& gold,
                                         AlignStats* stats) {
  std::map<std::pair<int, int>, std::vector<int>> by_span;
  int merged = 0;
  for (const auto& g : gold) {
    auto [it, inserted] = by_span.try_emplace({g.start, g.end}, g.types);
    if (!inserted) {
      ++merged;
      it->second.insert(it->second.end(), g.types.begin(), g.types.end());
      it->second = CanonicalTypes(std::move(it->second));
    }
  }
  if (merged > 0) {
    Warn(std::to_string(merged) + " gold nugget(s) share a span; type sets merged");
  }
  if (stats) stats->merged_gold += merged;
  for (auto& c : candidates) {
    auto it = by_span.find({c.start, c.end});
    c.types = it == by_span.end() ? std::vector<int>{} : it->second;
  }
  return candidates;
}

std::string_view BranchName(Branch b) {
  switch (b) {
    case Branch::kLeft:
      return "left";
    case Branch::kNugget:
      return "nugget";
    case Branch::kRight:
      return "right";
  }
  return "?";
}

BranchSplit SplitBranches(const Sentence& s, const NuggetCandidate& c) {
  if (c.start < 0 || c.end < c.start || c.end >= s.size()) {
    throw DataError("candidate span (" + std::to_string(c.start) + "," +
                    std::to_string(c.end) + ") outside sentence");
  }
  std::span<const Token> all(s.tokens);
  return {all.subspan(0, c.start), all.subspan(c.start, c.length()),
          all.subspan(c.end + 1)};
}

std::vector<SentenceCandidates> GenerateCandidates(const Corpus& corpus,
                                                   const TriggerLexicon& lexicon,
                                                   const CandidateOptions& options) {
  std::vector<SentenceCandidates> out;
  out.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    const Sentence& s = corpus.sentences[i];
    auto cands = ExtractSingleTokenCandidates(s, lexicon);
    if (options.expand) {
      try {
        cands = ExpandCandidates(s, cands, options.max_nugget_len);
      } catch (const DataError& e) {
        throw DataError("sentence " + std::to_string(i + 1) + ": " + e.what());
      }
    }
    out.push_back({i, AlignLabels(std::move(cands), s.nuggets)});
  }
  return out;
}

CandidateCoverage MeasureCoverage(const Corpus& corpus,
                                  const std::vector<SentenceCandidates>& candidates) {
  CandidateCoverage cov;
  for (const auto& sc : candidates) {
    const Sentence& s = corpus.sentences.at(sc.sentence);
    cov.candidates += sc.candidates.size();
    for (const auto& c : sc.candidates) cov.positives += c.IsEvent() ? 1 : 0;
    for (const auto& g : s.nuggets) {
      ++cov.gold;
      const bool hit = std::any_of(sc.candidates.begin(), sc.candidates.end(),
                                   [&](const NuggetCandidate& c) {
                                     return c.start == g.start && c.end == g.end;
                                   });
      cov.gold_covered += hit ? 1 : 0;
    }
  }
  return cov;
}

std::string CandidatesToJsonLines(const Corpus& corpus,
                                  const std::vector<SentenceCandidates>& candidates) {
  std::string out;
  for (const auto& sc : candidates) {
    json j = SentenceToJson(corpus.sentences.at(sc.sentence), corpus.labels);
    json list = json::array();
    for (const auto& c : sc.candidates) {
      json label = json::array();
      if (c.types.empty()) label.push_back(std::string(LabelSet::kNonEventName));
      for (int t : c.types) label.push_back(corpus.labels.Name(t));
      list.push_back({{"start", c.start}, {"end", c.end}, {"label", std::move(label)}});
    }
    j["candidates"] = std::move(list);
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace fbrnn
