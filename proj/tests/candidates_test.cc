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

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "fbrnn/candidates.h"
#include "fbrnn/corpus.h"
#include "fbrnn/errors.h"
#include "fbrnn/synthetic.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace fbrnn {
namespace {

using Pairs = std::vector<std::pair<std::string, std::string>>;

Sentence Tagged(const std::vector<std::pair<std::string, std::string>>& words) {
  Sentence s;
  for (const auto& [w, p] : words) s.tokens.push_back({w, p});
  return s;
}

Sentence FigureOne() {
  return Tagged({{"an", "DT"},
                 {"unknown", "JJ"},
                 {"man", "NN"},
                 {"had", "VBD"},
                 {"broken", "VBN"},
                 {"into", "IN"},
                 {"a", "DT"},
                 {"house", "NN"},
                 {"last", "JJ"},
                 {"November", "NNP"}});
}

std::vector<std::string> Texts(std::span<const Token> tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

std::vector<std::pair<int, int>> Spans(const std::vector<NuggetCandidate>& cands) {
  std::vector<std::pair<int, int>> out;
  for (const auto& c : cands) out.emplace_back(c.start, c.end);
  return out;
}

Corpus FigureOneCorpus() {
  Corpus c;
  c.labels = LabelSet::Ace2005();
  Sentence s = FigureOne();
  s.nuggets.push_back({4, 5, {*c.labels.Find("Conflict.Attack")}});
  c.sentences.push_back(s);
  return c;
}

TEST(LexiconTest, HeadTokenOfGoldNugget) {
  const TriggerLexicon lex = BuildTriggerLexicon(FigureOneCorpus(), Pairs{});
  EXPECT_TRUE(lex.Contains("broken"));
  EXPECT_TRUE(lex.Contains("BROKEN"));
  EXPECT_FALSE(lex.Contains("into"));
  EXPECT_EQ(lex.size(), 1u);
  EXPECT_EQ(lex.entries().at("broken").train_count, 1);
}

TEST(LexiconTest, EmptyCorpusGivesEmptyLexicon) {
  SetWarningsEnabled(false);
  EXPECT_TRUE(BuildTriggerLexicon(Corpus{}, Pairs{}).empty());
  SetWarningsEnabled(true);
}

TEST(LexiconTest, ParaphrasesOfEntriesAreAdded) {
  const TriggerLexicon lex =
      BuildTriggerLexicon(FigureOneCorpus(), Pairs{{"broken", "smashed"}, {"walked", "strolled"},
                                                   {"broken", "torn apart"}});
  EXPECT_TRUE(lex.Contains("smashed"));
  EXPECT_EQ(lex.entries().at("smashed").paraphrase_count, 1);
  EXPECT_EQ(lex.entries().at("smashed").train_count, 0);
  EXPECT_TRUE(lex.Contains("torn"));
  EXPECT_FALSE(lex.Contains("strolled"));
}

TEST(LexiconTest, ParaphraseFileFormat) {
  const auto pairs = ParseParaphrases("# comment\nbroken\tsmashed\n\nDied\tperished\n", "p.tsv");
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0], (std::pair<std::string, std::string>{"broken", "smashed"}));
  EXPECT_THROW(ParseParaphrases("no tab here\n", "p.tsv"), DataError);
  EXPECT_THROW(BuildTriggerLexicon(FigureOneCorpus(),
                                   std::optional<std::filesystem::path>("/nonexistent/p.tsv")),
               DataError);
}

TEST(LexiconTest, TsvRoundTrip) {
  const TriggerLexicon lex =
      BuildTriggerLexicon(FigureOneCorpus(), Pairs{{"broken", "smashed"}});
  EXPECT_EQ(TriggerLexicon::FromTsv(lex.ToTsv(), "lex.tsv"), lex);
}

TEST(SingleTokenTest, FigureOne) {
  TriggerLexicon lex;
  lex.AddTrain("broken");
  EXPECT_EQ(Spans(ExtractSingleTokenCandidates(FigureOne(), lex)),
            (std::vector<std::pair<int, int>>{{4, 4}}));
  EXPECT_TRUE(ExtractSingleTokenCandidates(FigureOne(), TriggerLexicon{}).empty());
}

TEST(SingleTokenTest, RepeatedTokenGivesTwoCandidates) {
  TriggerLexicon lex;
  lex.AddTrain("hit");
  const Sentence s = Tagged({{"Hit", "VB"}, {"and", "CC"}, {"hit", "VB"}});
  EXPECT_EQ(Spans(ExtractSingleTokenCandidates(s, lex)),
            (std::vector<std::pair<int, int>>{{0, 0}, {2, 2}}));
}

TEST(ExpandTest, FigureOne) {
  TriggerLexicon lex;
  lex.AddTrain("broken");
  const Sentence s = FigureOne();
  const auto out = ExpandCandidates(s, ExtractSingleTokenCandidates(s, lex), 3);
  EXPECT_EQ(Spans(out), (std::vector<std::pair<int, int>>{{4, 4}, {4, 5}}));
}

TEST(ExpandTest, NounDoesNotExtend) {
  const Sentence s = Tagged({{"attacked", "VBD"}, {"towns", "NNS"}});
  const auto out = ExpandCandidates(s, {{0, 0, {}}}, 3);
  EXPECT_EQ(Spans(out), (std::vector<std::pair<int, int>>{{0, 0}}));
}

TEST(ExpandTest, AllPrefixesUpToMaxLen) {
  const Sentence s = Tagged({{"he", "PRP"}, {"gave", "VBD"}, {"up", "RP"}, {"on", "IN"},
                             {"in", "IN"}, {"it", "PRP"}});
  EXPECT_EQ(Spans(ExpandCandidates(s, {{1, 1, {}}}, 3)),
            (std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {1, 3}}));
  EXPECT_EQ(Spans(ExpandCandidates(s, {{1, 1, {}}}, 1)),
            (std::vector<std::pair<int, int>>{{1, 1}}));
}

TEST(ExpandTest, NonVerbHeadNotExpanded) {
  const Sentence s = Tagged({{"attack", "NN"}, {"on", "IN"}});
  EXPECT_EQ(Spans(ExpandCandidates(s, {{0, 0, {}}}, 3)),
            (std::vector<std::pair<int, int>>{{0, 0}}));
}

TEST(ExpandTest, MissingPosIsDataError) {
  Sentence s;
  s.tokens = {{"broke", std::nullopt}, {"into", std::nullopt}};
  try {
    ExpandCandidates(s, {{0, 0, {}}}, 3);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("expand"), std::string::npos) << e.what();
  }
}

TEST(AlignTest, ExactSpanOnly) {
  const std::vector<GoldNugget> gold = {{4, 5, {7}}};
  const auto out = AlignLabels({{4, 4, {}}, {4, 5, {}}}, gold);
  EXPECT_FALSE(out[0].IsEvent());
  EXPECT_EQ(out[1].types, (std::vector<int>{7}));
}

TEST(AlignTest, MultiLabelAndMergedDuplicates) {
  AlignStats stats;
  SetWarningsEnabled(false);
  auto out = AlignLabels({{2, 2, {}}}, {{2, 2, {1, 3}}}, &stats);
  EXPECT_EQ(out[0].types, (std::vector<int>{1, 3}));
  EXPECT_EQ(stats.merged_gold, 0);
  out = AlignLabels({{2, 2, {}}}, {{2, 2, {3}}, {2, 2, {1}}}, &stats);
  SetWarningsEnabled(true);
  EXPECT_EQ(out[0].types, (std::vector<int>{1, 3}));
  EXPECT_EQ(stats.merged_gold, 1);
}

TEST(SplitBranchesTest, FigureOne) {
  const Sentence s = FigureOne();
  const BranchSplit split = SplitBranches(s, {4, 5, {}});
  EXPECT_EQ(Texts(split.left), (std::vector<std::string>{"an", "unknown", "man", "had"}));
  EXPECT_EQ(Texts(split.nugget), (std::vector<std::string>{"broken", "into"}));
  EXPECT_EQ(Texts(split.right), (std::vector<std::string>{"a", "house", "last", "November"}));
}

TEST(SplitBranchesTest, Boundaries) {
  const Sentence s = FigureOne();
  BranchSplit split = SplitBranches(s, {0, 9, {}});
  EXPECT_TRUE(split.left.empty());
  EXPECT_TRUE(split.right.empty());
  EXPECT_EQ(split.nugget.size(), 10u);
  split = SplitBranches(s, {0, 0, {}});
  EXPECT_TRUE(split.left.empty());
  EXPECT_EQ(split.right.size(), 9u);
  EXPECT_THROW(SplitBranches(s, {3, 10, {}}), DataError);
  EXPECT_THROW(SplitBranches(s, {3, 2, {}}), DataError);
}

bool MatchesExpansionShape(const Sentence& s, const GoldNugget& n, int max_len) {
  if (n.end - n.start + 1 > max_len) return false;
  if (n.end == n.start) return true;
  if (s.tokens[n.start].pos->rfind("VB", 0) != 0) return false;
  for (int i = n.start + 1; i <= n.end; ++i) {
    if (*s.tokens[i].pos != "RP" && *s.tokens[i].pos != "IN") return false;
  }
  return true;
}

TEST(CandidatePropertyTest, RecallOnSyntheticCorpus) {
  Rng rng(31);
  const SyntheticGrammar g = DefaultGrammar();
  const Corpus train = MakeSyntheticCorpus(g, 150, rng);
  const Corpus test = MakeSyntheticCorpus(g, 150, rng);
  const TriggerLexicon lex = BuildTriggerLexicon(train, g.paraphrases);
  const CandidateOptions opts;
  const auto cands = GenerateCandidates(test, lex, opts);
  size_t eligible = 0;
  for (size_t i = 0; i < test.size(); ++i) {
    const Sentence& s = test.sentences[i];
    for (const auto& n : s.nuggets) {
      if (!lex.Contains(s.tokens[n.start].text) ||
          !MatchesExpansionShape(s, n, opts.max_nugget_len)) {
        continue;
      }
      ++eligible;
      const auto& cs = cands[i].candidates;
      const bool found = std::any_of(cs.begin(), cs.end(), [&](const NuggetCandidate& c) {
        return c.start == n.start && c.end == n.end && c.types == n.types;
      });
      EXPECT_TRUE(found) << "sentence " << i << " span " << n.start << "," << n.end;
    }
  }
  EXPECT_GT(eligible, 100u);
  const CandidateCoverage cov = MeasureCoverage(test, cands);
  EXPECT_EQ(cov.gold_covered, eligible);
}

TEST(CandidatePropertyTest, SplitConcatenationAndLengthOneRestriction) {
  Rng rng(8);
  const SyntheticGrammar g = DefaultGrammar();
  const Corpus c = MakeSyntheticCorpus(g, 120, rng);
  const TriggerLexicon lex = BuildTriggerLexicon(c, g.paraphrases);
  for (const auto& s : c.sentences) {
    const auto singles = ExtractSingleTokenCandidates(s, lex);
    const auto expanded = ExpandCandidates(s, singles, 3);
    std::vector<NuggetCandidate> ones;
    for (const auto& e : expanded) {
      EXPECT_LE(e.length(), 3);
      if (e.length() == 1) ones.push_back(e);
    }
    EXPECT_EQ(ones, singles);
    for (const auto& cand : expanded) {
      const BranchSplit split = SplitBranches(s, cand);
      std::vector<Token> joined(split.left.begin(), split.left.end());
      joined.insert(joined.end(), split.nugget.begin(), split.nugget.end());
      joined.insert(joined.end(), split.right.begin(), split.right.end());
      EXPECT_EQ(joined, s.tokens);
    }
  }
}

TEST(CandidateDumpTest, JsonLinesWithLabels) {
  const Corpus c = FigureOneCorpus();
  TriggerLexicon lex;
  lex.AddTrain("broken");
  const auto cands = GenerateCandidates(c, lex, CandidateOptions{});
  const auto j = nlohmann::json::parse(CandidatesToJsonLines(c, cands));
  ASSERT_EQ(j["candidates"].size(), 2u);
  EXPECT_EQ(j["candidates"][0]["label"], nlohmann::json({"NON_EVENT"}));
  EXPECT_EQ(j["candidates"][1]["start"], 4);
  EXPECT_EQ(j["candidates"][1]["end"], 5);
  EXPECT_EQ(j["candidates"][1]["label"], nlohmann::json({"Conflict.Attack"}));
  EXPECT_EQ(j["tokens"].size(), 10u);
}

}  // namespace
}  // namespace fbrnn
