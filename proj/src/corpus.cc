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

#include "fbrnn/corpus.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fbrnn/errors.h"
#include "fbrnn/io.h"

namespace fbrnn {

using nlohmann::json;

namespace {

const std::vector<std::string>& AceTypes() {
  static const std::vector<std::string> types = {
      "Life.Be-Born", "Life.Marry", "Life.Divorce", "Life.Injure", "Life.Die",
      "Movement.Transport",
      "Transaction.Transfer-Ownership", "Transaction.Transfer-Money",
      "Business.Start-Org", "Business.Merge-Org", "Business.Declare-Bankruptcy",
      "Business.End-Org",
      "Conflict.Attack", "Conflict.Demonstrate",
      "Contact.Meet", "Contact.Phone-Write",
      "Personnel.Start-Position", "Personnel.End-Position", "Personnel.Nominate",
      "Personnel.Elect",
      "Justice.Arrest-Jail", "Justice.Release-Parole", "Justice.Trial-Hearing",
      "Justice.Charge-Indict", "Justice.Sue", "Justice.Convict", "Justice.Sentence",
      "Justice.Fine", "Justice.Execute", "Justice.Extradite", "Justice.Acquit",
      "Justice.Appeal", "Justice.Pardon"};
  return types;
}

const std::vector<std::string>& EreTypes() {
  static const std::vector<std::string> types = {
      "Business.Start-Org", "Business.Merge-Org", "Business.Declare-Bankruptcy",
      "Business.End-Org",
      "Conflict.Attack", "Conflict.Demonstrate",
      "Contact.Meet", "Contact.Correspondence", "Contact.Broadcast", "Contact.Contact",
      "Justice.Arrest-Jail", "Justice.Release-Parole", "Justice.Trial-Hearing",
      "Justice.Charge-Indict", "Justice.Sue", "Justice.Convict", "Justice.Sentence",
      "Justice.Fine", "Justice.Execute", "Justice.Extradite", "Justice.Acquit",
      "Justice.Appeal", "Justice.Pardon",
      "Life.Be-Born", "Life.Marry", "Life.Divorce", "Life.Injure", "Life.Die",
      "Manufacture.Artifact",
      "Movement.Transport-Person", "Movement.Transport-Artifact",
      "Personnel.Start-Position", "Personnel.End-Position", "Personnel.Nominate",
      "Personnel.Elect",
      "Transaction.Transfer-Ownership", "Transaction.Transfer-Money",
      "Transaction.Transaction"};
  return types;
}

[[noreturn]] void Fail(const std::string& where, const std::string& field,
                       const std::string& what) {
  throw DataError(where + ": field '" + field + "': " + what);
}

}  // namespace

LabelSet::LabelSet(std::vector<std::string> event_types)
    : event_types_(std::move(event_types)) {
  std::set<std::string_view> seen;
  for (const auto& t : event_types_) {
    if (t.empty()) throw DataError("label set: empty type name");
    if (t == kNonEventName) {
      throw DataError("label set: NON_EVENT is implicit and must not be listed");
    }
    if (!seen.insert(t).second) throw DataError("label set: duplicate type " + t);
  }
}

LabelSet LabelSet::Ace2005() { return LabelSet(AceTypes()); }
LabelSet LabelSet::RichEre2015() { return LabelSet(EreTypes()); }

LabelSet LabelSet::Load(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  if (!j.is_array()) throw DataError(path.string() + ": label file must be a JSON array");
  std::vector<std::string> types;
  for (const auto& item : j) {
    if (!item.is_string()) throw DataError(path.string() + ": label entries must be strings");
    types.push_back(item.get<std::string>());
  }
  return LabelSet(std::move(types));
}

std::string LabelSet::ToJson() const { return json(event_types_).dump(1) + "\n"; }

std::optional<int> LabelSet::Find(std::string_view name) const {
  if (name == kNonEventName) return kNonEvent;
  auto it = std::find(event_types_.begin(), event_types_.end(), name);
  if (it == event_types_.end()) return std::nullopt;
  return static_cast<int>(it - event_types_.begin()) + 1;
}

const std::string& LabelSet::Name(int class_id) const {
  static const std::string non_event(kNonEventName);
  if (class_id == kNonEvent) return non_event;
  if (class_id < 0 || class_id > num_types()) {
    throw ConfigError("class id out of range: " + std::to_string(class_id));
  }
  return event_types_[class_id - 1];
}

bool Sentence::HasPos() const {
  return std::all_of(tokens.begin(), tokens.end(),
                     [](const Token& t) { return t.pos.has_value(); });
}

size_t Corpus::NuggetCount() const {
  size_t n = 0;
  for (const auto& s : sentences) n += s.nuggets.size();
  return n;
}

std::vector<int> CanonicalTypes(std::vector<int> types) {
  std::sort(types.begin(), types.end());
  types.erase(std::unique(types.begin(), types.end()), types.end());
  return types;
}

void ValidateSentence(const Sentence& s, const LabelSet& labels, const std::string& where) {
  if (s.tokens.empty()) Fail(where, "tokens", "sentence has no tokens");
  for (size_t i = 0; i < s.tokens.size(); ++i) {
    if (s.tokens[i].text.empty()) {
      Fail(where, "tokens[" + std::to_string(i) + "].t", "empty token text");
    }
  }
  for (size_t k = 0; k < s.nuggets.size(); ++k) {
    const auto& n = s.nuggets[k];
    const std::string field = "nuggets[" + std::to_string(k) + "]";
    if (n.end < n.start) {
      Fail(where, field + ".end", "end " + std::to_string(n.end) + " < start " +
                                      std::to_string(n.start));
    }
    if (n.start < 0 || n.end >= s.size()) {
      Fail(where, field, "span (" + std::to_string(n.start) + "," + std::to_string(n.end) +
                             ") outside sentence of length " + std::to_string(s.size()));
    }
    if (n.types.empty()) Fail(where, field + ".types", "at least one type required");
    for (int t : n.types) {
      if (t < 1 || t > labels.num_types()) {
        Fail(where, field + ".types", "class id " + std::to_string(t) + " out of range");
      }
    }
  }
}

json SentenceToJson(const Sentence& s, const LabelSet& labels) {
  json tokens = json::array();
  for (const auto& t : s.tokens) {
    json tok = {{"t", t.text}};
    if (t.pos) tok["pos"] = *t.pos;
    tokens.push_back(std::move(tok));
  }
  json nuggets = json::array();
  for (const auto& n : s.nuggets) {
    json types = json::array();
    for (int t : n.types) types.push_back(labels.Name(t));
    nuggets.push_back({{"start", n.start}, {"end", n.end}, {"types", std::move(types)}});
  }
  return {{"tokens", std::move(tokens)}, {"nuggets", std::move(nuggets)}};
}

Sentence SentenceFromJson(const json& j, const LabelSet& labels, const std::string& where) {
  if (!j.is_object()) Fail(where, "<root>", "expected a JSON object");
  Sentence s;
  auto tok_it = j.find("tokens");
  if (tok_it == j.end() || !tok_it->is_array()) Fail(where, "tokens", "missing or not an array");
  for (size_t i = 0; i < tok_it->size(); ++i) {
    const json& tj = (*tok_it)[i];
    const std::string field = "tokens[" + std::to_string(i) + "]";
    if (!tj.is_object()) Fail(where, field, "expected an object");
    auto t = tj.find("t");
    if (t == tj.end() || !t->is_string()) Fail(where, field + ".t", "missing or not a string");
    Token token{t->get<std::string>(), std::nullopt};
    auto pos = tj.find("pos");
    if (pos != tj.end() && !pos->is_null()) {
      if (!pos->is_string()) Fail(where, field + ".pos", "not a string");
      token.pos = pos->get<std::string>();
    }
    s.tokens.push_back(std::move(token));
  }
  auto nug_it = j.find("nuggets");
  if (nug_it != j.end() && !nug_it->is_null()) {
    if (!nug_it->is_array()) Fail(where, "nuggets", "not an array");
    for (size_t k = 0; k < nug_it->size(); ++k) {
      const json& nj = (*nug_it)[k];
      const std::string field = "nuggets[" + std::to_string(k) + "]";
      if (!nj.is_object()) Fail(where, field, "expected an object");
      GoldNugget n;
      for (const char* key : {"start", "end"}) {
        auto v = nj.find(key);
        if (v == nj.end() || !v->is_number_integer()) {
          Fail(where, field + "." + key, "missing or not an integer");
        }
        (std::string_view(key) == "start" ? n.start : n.end) = v->get<int>();
      }
      auto types = nj.find("types");
      if (types == nj.end() || !types->is_array()) {
        Fail(where, field + ".types", "missing or not an array");
      }
      for (const auto& tj : *types) {
        if (!tj.is_string()) Fail(where, field + ".types", "type names must be strings");
        const auto name = tj.get<std::string>();
        auto id = labels.Find(name);
        if (!id) Fail(where, field + ".types", "unknown label '" + name + "'");
        if (*id == LabelSet::kNonEvent) {
          Fail(where, field + ".types", "NON_EVENT cannot annotate a gold nugget");
        }
        n.types.push_back(*id);
      }
      n.types = CanonicalTypes(std::move(n.types));
      s.nuggets.push_back(std::move(n));
    }
  }
  ValidateSentence(s, labels, where);
  return s;
}

Corpus ParseCorpus(std::string_view text, const LabelSet& labels, const std::string& source) {
  Corpus corpus{labels, {}};
  const auto lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const std::string where = source + ":" + std::to_string(i + 1);
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::exception& e) {
      throw DataError(where + ": malformed JSON: " + e.what());
    }
    corpus.sentences.push_back(SentenceFromJson(j, labels, where));
  }
  return corpus;
}

Corpus LoadCorpus(const std::filesystem::path& path, const LabelSet& labels) {
  return ParseCorpus(ReadFile(path), labels, path.string());
}

std::string CorpusToJsonLines(const Corpus& corpus) {
  std::string out;
  for (const auto& s : corpus.sentences) {
    out += SentenceToJson(s, corpus.labels).dump();
    out += '\n';
  }
  return out;
}

void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  WriteFileAtomic(path, CorpusToJsonLines(corpus));
}

std::pair<Corpus, Corpus> SplitCorpus(const Corpus& corpus, double dev_fraction, Rng& rng) {
  if (!(dev_fraction > 0.0 && dev_fraction < 1.0)) {
    throw ConfigError("dev_fraction must be in (0, 1)");
  }
  std::vector<size_t> order(corpus.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.Shuffle(order);
  const auto n_dev = static_cast<size_t>(
      std::llround(dev_fraction * static_cast<double>(corpus.size())));
  Corpus train{corpus.labels, {}};
  Corpus dev{corpus.labels, {}};
  for (size_t k = 0; k < order.size(); ++k) {
    (k < n_dev ? dev : train).sentences.push_back(corpus.sentences[order[k]]);
  }
  return {std::move(train), std::move(dev)};
}

}  // namespace fbrnn
