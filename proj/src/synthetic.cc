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

#include "fbrnn/synthetic.h"

#include <algorithm>
#include <map>
#include <sstream>

#include "fbrnn/errors.h"
#include "fbrnn/io.h"

namespace fbrnn {

namespace {

struct PatternItem {
  bool is_slot = false;
  std::string text;  // slot name or word
  std::string pos;
};

struct ParsedPattern {
  std::vector<PatternItem> items;
  int nugget_begin = -1;  // item index range [begin, end)
  int nugget_end = -1;
};

std::vector<std::string> SplitWs(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string item;
  while (in >> item) out.push_back(item);
  return out;
}

Token ParseWordPos(std::string_view item, const std::string& context) {
  const size_t slash = item.rfind('/');
  if (slash == std::string_view::npos || slash == 0 || slash + 1 == item.size()) {
    throw ConfigError(context + ": expected word/POS, got '" + std::string(item) + "'");
  }
  return Token{std::string(item.substr(0, slash)), std::string(item.substr(slash + 1))};
}

ParsedPattern ParsePattern(const std::string& pattern) {
  ParsedPattern parsed;
  bool open = false;
  const std::string context = "pattern '" + pattern + "'";
  for (std::string item : SplitWs(pattern)) {
    bool opens = false, closes = false;
    if (!item.empty() && item.front() == '{') {
      opens = true;
      item.erase(0, 1);
    }
    if (!item.empty() && item.back() == '}') {
      closes = true;
      item.pop_back();
    }
    if (item.empty()) throw ConfigError(context + ": empty item");
    if (opens) {
      if (open || parsed.nugget_begin >= 0) {
        throw ConfigError(context + ": at most one {nugget} per pattern");
      }
      open = true;
      parsed.nugget_begin = static_cast<int>(parsed.items.size());
    }
    PatternItem pi;
    if (item.front() == '@') {
      pi.is_slot = true;
      pi.text = item.substr(1);
    } else {
      Token t = ParseWordPos(item, context);
      pi.text = t.text;
      pi.pos = *t.pos;
    }
    parsed.items.push_back(std::move(pi));
    if (closes) {
      if (!open) throw ConfigError(context + ": '}' without '{'");
      open = false;
      parsed.nugget_end = static_cast<int>(parsed.items.size());
    }
  }
  if (open) throw ConfigError(context + ": unclosed '{'");
  if (parsed.items.empty()) throw ConfigError(context + ": empty pattern");
  return parsed;
}

std::vector<Token> ParsePhrase(const std::string& phrase, const std::string& cls) {
  std::vector<Token> tokens;
  for (const auto& item : SplitWs(phrase)) {
    tokens.push_back(ParseWordPos(item, "filler @" + cls));
  }
  if (tokens.empty()) throw ConfigError("filler @" + cls + ": empty phrase");
  return tokens;
}

}  // namespace

SyntheticGrammar DefaultGrammar() {
  SyntheticGrammar g;
  g.fillers = {
      {"PERSON",
       {"an/DT unknown/JJ man/NN", "the/DT soldiers/NNS", "a/DT young/JJ woman/NN",
        "the/DT rebels/NNS", "police/NNS", "the/DT minister/NN", "john/NNP smith/NNP",
        "the/DT gunmen/NNS", "two/CD students/NNS", "the/DT manager/NN"}},
      {"PLACE",
       {"a/DT house/NN", "the/DT embassy/NN", "the/DT village/NN", "a/DT bank/NN",
        "the/DT capital/NN", "the/DT airport/NN", "a/DT school/NN"}},
      {"TIME",
       {"last/JJ November/NNP", "yesterday/NN", "on/IN Monday/NNP", "in/IN March/NNP",
        "this/DT morning/NN", "last/JJ week/NN"}},
      {"ORG", {"the/DT company/NN", "the/DT ministry/NN", "the/DT party/NN", "the/DT board/NN"}},
  };
  g.templates = {
      {{"Conflict.Attack"},
       1.2,
       {"@PERSON had/VBD {broken/VBN into/IN} @PLACE @TIME",
        "@PERSON {broke/VBD into/IN} @PLACE @TIME", "@PERSON {attacked/VBD} @PLACE @TIME",
        "@TIME @PERSON {stormed/VBD} @PLACE"}},
      {{"Movement.Transport"},
       1.0,
       {"@PERSON {traveled/VBD} to/TO @PLACE @TIME",
        "@PERSON {set/VBD off/RP} for/IN @PLACE @TIME",
        "@TIME @PERSON {arrived/VBD} at/IN @PLACE"}},
      {{"Life.Die"},
       1.0,
       {"@PERSON {died/VBD} @TIME", "@PERSON {passed/VBD away/RP} @TIME",
        "@PERSON was/VBD {killed/VBN} in/IN @PLACE"}},
      {{"Justice.Arrest-Jail"},
       0.8,
       {"@PERSON {arrested/VBD} @PERSON @TIME", "@PERSON {locked/VBD up/RP} @PERSON @TIME",
        "@PERSON was/VBD {detained/VBN} at/IN @PLACE"}},
      {{"Personnel.End-Position"},
       0.8,
       {"@PERSON {resigned/VBD} from/IN @ORG @TIME",
        "@PERSON {stepped/VBD down/RP} from/IN @ORG", "@ORG {fired/VBD} @PERSON @TIME"}},
      {{},
       1.0,
       {"@PERSON fixed/VBD the/DT broken/JJ window/NN @TIME",
        "@PERSON said/VBD the/DT car/NN broke/VBD down/RP @TIME",
        "@PERSON set/VBD the/DT table/NN @TIME", "@PERSON locked/VBD the/DT door/NN @TIME",
        "@PERSON watched/VBD a/DT film/NN about/IN @PLACE"}},
  };
  g.paraphrases = {{"attacked", "assaulted"}, {"broken", "smashed"}, {"died", "perished"},
                   {"arrested", "apprehended"}, {"resigned", "quit"},
                   {"traveled", "journeyed"}, {"killed", "slain"}};
  return g;
}

SyntheticGrammar PositionalGrammar() {
  SyntheticGrammar g;
  g.fillers = {{"W",
                {"stone/NN", "river/NN", "cloud/NN", "table/NN", "garden/NN", "window/NN",
                 "letter/NN", "bridge/NN", "forest/NN", "candle/NN"}}};
  g.templates = {
      {{"Position.First"}, 1.0, {"@W {hit/VBD} @W @W @W @W @W"}},
      {{"Position.Third"}, 1.0, {"@W @W @W {hit/VBD} @W @W @W"}},
      {{"Position.Fifth"}, 1.0, {"@W @W @W @W @W {hit/VBD} @W"}},
      {{}, 1.0, {"@W @W hit/VBD @W @W @W @W", "@W @W @W @W hit/VBD @W @W"}},
  };
  g.paraphrases = {{"hit", "struck"}};
  return g;
}

SyntheticGrammar LoadGrammar(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  SyntheticGrammar g;
  try {
    for (const auto& [name, phrases] : j.at("fillers").items()) {
      g.fillers.push_back({name, phrases.get<std::vector<std::string>>()});
    }
    for (const auto& t : j.at("templates")) {
      EventTemplate et;
      et.types = t.value("types", std::vector<std::string>{});
      et.weight = t.value("weight", 1.0);
      et.patterns = t.at("patterns").get<std::vector<std::string>>();
      g.templates.push_back(std::move(et));
    }
    if (j.contains("paraphrases")) {
      for (const auto& p : j.at("paraphrases")) {
        g.paraphrases.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": invalid grammar: " + e.what());
  }
  return g;
}

LabelSet GrammarLabels(const SyntheticGrammar& grammar) {
  std::vector<std::string> types;
  for (const auto& t : grammar.templates) {
    for (const auto& name : t.types) {
      if (std::find(types.begin(), types.end(), name) == types.end()) types.push_back(name);
    }
  }
  return LabelSet(std::move(types));
}

Corpus MakeSyntheticCorpus(const SyntheticGrammar& grammar, size_t count, Rng& rng) {
  if (grammar.templates.empty()) throw ConfigError("synthetic grammar has no templates");
  const LabelSet labels = GrammarLabels(grammar);

  std::map<std::string, std::vector<std::vector<Token>>> fillers;
  for (const auto& f : grammar.fillers) {
    if (f.phrases.empty()) throw ConfigError("filler @" + f.name + " has no phrases");
    auto& phrases = fillers[f.name];
    for (const auto& p : f.phrases) phrases.push_back(ParsePhrase(p, f.name));
  }

  double total_weight = 0.0;
  std::vector<std::vector<ParsedPattern>> parsed(grammar.templates.size());
  std::vector<std::vector<int>> template_types(grammar.templates.size());
  for (size_t ti = 0; ti < grammar.templates.size(); ++ti) {
    const auto& t = grammar.templates[ti];
    if (!(t.weight > 0.0)) throw ConfigError("template weights must be positive");
    if (t.patterns.empty()) throw ConfigError("template without patterns");
    total_weight += t.weight;
    for (const auto& name : t.types) template_types[ti].push_back(*labels.Find(name));
    template_types[ti] = CanonicalTypes(std::move(template_types[ti]));
    for (const auto& p : t.patterns) {
      ParsedPattern pp = ParsePattern(p);
      const bool has_nugget = pp.nugget_begin >= 0;
      if (has_nugget != !t.types.empty()) {
        throw ConfigError("pattern '" + p + "': event templates need exactly one {nugget}, "
                          "non-event templates none");
      }
      for (const auto& item : pp.items) {
        if (item.is_slot && !fillers.count(item.text)) {
          throw ConfigError("pattern '" + p + "': unknown filler @" + item.text);
        }
      }
      parsed[ti].push_back(std::move(pp));
    }
  }

  Corpus corpus{labels, {}};
  corpus.sentences.reserve(count);
  for (size_t n = 0; n < count; ++n) {
    double u = rng.Uniform() * total_weight;
    size_t ti = 0;
    while (ti + 1 < grammar.templates.size() && u >= grammar.templates[ti].weight) {
      u -= grammar.templates[ti].weight;
      ++ti;
    }
    const ParsedPattern& pattern = parsed[ti][rng.Below(parsed[ti].size())];
    Sentence s;
    int nugget_start = -1, nugget_end = -1;
    for (int k = 0; k < static_cast<int>(pattern.items.size()); ++k) {
      if (k == pattern.nugget_begin) nugget_start = s.size();
      const auto& item = pattern.items[k];
      if (item.is_slot) {
        const auto& options = fillers.at(item.text);
        const auto& phrase = options[rng.Below(options.size())];
        s.tokens.insert(s.tokens.end(), phrase.begin(), phrase.end());
      } else {
        s.tokens.push_back(Token{item.text, item.pos});
      }
      if (k + 1 == pattern.nugget_end) nugget_end = s.size() - 1;
    }
    if (nugget_start >= 0) {
      s.nuggets.push_back(GoldNugget{nugget_start, nugget_end, template_types[ti]});
    }
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

std::string ParaphrasesToTsv(const SyntheticGrammar& grammar) {
  std::string out = "# source\tparaphrase\n";
  for (const auto& [src, para] : grammar.paraphrases) out += src + "\t" + para + "\n";
  return out;
}

}  // namespace fbrnn
