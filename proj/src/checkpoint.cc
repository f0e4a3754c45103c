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

#include "fbrnn/checkpoint.h"

#include <set>

#include "fbrnn/errors.h"
#include "fbrnn/io.h"
#include "json.hpp"

namespace fbrnn {

using nlohmann::json;

namespace {

json ConfigToJson(const ModelConfig& c) {
  return {{"cell", CellKindName(c.cell)},   {"word_dim", c.word_dim},
          {"branch_dim", c.branch_dim},     {"use_branch", c.use_branch},
          {"hidden", c.hidden},             {"layers", c.layers},
          {"head", HeadModeName(c.head)},   {"head_hidden", c.head_hidden},
          {"head_layers", c.head_layers},   {"dropout", c.dropout},
          {"num_classes", c.num_classes}};
}

ModelConfig ConfigFromJson(const json& j) {
  ModelConfig c;
  c.cell = ParseCellKind(j.at("cell").get<std::string>());
  c.word_dim = j.at("word_dim").get<int>();
  c.branch_dim = j.at("branch_dim").get<int>();
  c.use_branch = j.at("use_branch").get<bool>();
  c.hidden = j.at("hidden").get<int>();
  c.layers = j.at("layers").get<int>();
  c.head = ParseHeadMode(j.at("head").get<std::string>());
  c.head_hidden = j.at("head_hidden").get<int>();
  c.head_layers = j.at("head_layers").get<int>();
  c.dropout = j.at("dropout").get<double>();
  c.num_classes = j.at("num_classes").get<int>();
  return c;
}

void CheckArchitecture(const ModelConfig& stored, const ModelConfig& expected) {
  auto check = [](bool same, const std::string& field, const std::string& got,
                  const std::string& want) {
    if (!same) {
      throw ConfigError("checkpoint " + field + " is " + got + " but the run expects " + want);
    }
  };
  check(stored.cell == expected.cell, "cell", std::string(CellKindName(stored.cell)),
        std::string(CellKindName(expected.cell)));
  check(stored.head == expected.head, "head", std::string(HeadModeName(stored.head)),
        std::string(HeadModeName(expected.head)));
  const std::pair<const char*, std::pair<int, int>> ints[] = {
      {"word_dim", {stored.word_dim, expected.word_dim}},
      {"hidden", {stored.hidden, expected.hidden}},
      {"layers", {stored.layers, expected.layers}},
      {"head_hidden", {stored.head_hidden, expected.head_hidden}},
      {"head_layers", {stored.head_layers, expected.head_layers}},
      {"num_classes", {stored.num_classes, expected.num_classes}},
      {"use_branch", {stored.use_branch, expected.use_branch}},
      {"branch_dim",
       {stored.use_branch ? stored.branch_dim : 0, expected.use_branch ? expected.branch_dim : 0}},
  };
  for (const auto& [name, v] : ints) {
    check(v.first == v.second, name, std::to_string(v.first), std::to_string(v.second));
  }
}

}  // namespace

std::string CheckpointToJson(const Checkpoint& ckpt) {
  json tensors = json::array();
  for (const auto& t : ckpt.model.params()) {
    tensors.push_back({{"name", t.name}, {"shape", t.shape}, {"values", t.values}});
  }
  json j = {{"format", kCheckpointFormat},
            {"version", kCheckpointVersion},
            {"config", ConfigToJson(ckpt.model.config())},
            {"labels", ckpt.labels.event_types()},
            {"vocab", ckpt.model.vocab().words()},
            {"candidates",
             {{"max_nugget_len", ckpt.candidates.max_nugget_len},
              {"expand", ckpt.candidates.expand}}},
            {"threshold", ckpt.threshold},
            {"tensors", std::move(tensors)}};
  if (ckpt.lexicon) {
    json lex = json::array();
    for (const auto& [word, e] : ckpt.lexicon->entries()) {
      lex.push_back({word, e.train_count, e.paraphrase_count});
    }
    j["lexicon"] = std::move(lex);
  }
  return j.dump() + "\n";
}

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  WriteFileAtomic(path, CheckpointToJson(ckpt));
}

Checkpoint CheckpointFromJson(std::string_view text, const std::string& source,
                              const ModelConfig* expected) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(source + ": not a valid checkpoint (" + e.what() + ")");
  }
  try {
    if (j.value("format", std::string()) != kCheckpointFormat) {
      throw DataError(source + ": missing fbrnn-checkpoint format tag");
    }
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw DataError(source + ": unsupported checkpoint version " + std::to_string(version));
    }
    const ModelConfig config = ConfigFromJson(j.at("config"));
    if (expected) CheckArchitecture(config, *expected);

    Checkpoint ckpt;
    ckpt.labels = LabelSet(j.at("labels").get<std::vector<std::string>>());
    if (ckpt.labels.num_classes() != config.num_classes) {
      throw DataError(source + ": label count does not match num_classes");
    }
    Vocabulary vocab = Vocabulary::FromWords(j.at("vocab").get<std::vector<std::string>>());
    Rng scratch(0);
    ckpt.model = Fbrnn(config, std::move(vocab), scratch);

    std::set<std::string> seen;
    for (const auto& tj : j.at("tensors")) {
      const auto name = tj.at("name").get<std::string>();
      auto idx = ckpt.model.params().Find(name);
      if (!idx) throw DataError(source + ": tensor " + name + " does not belong to this config");
      Tensor& t = ckpt.model.params().at(*idx);
      const auto shape = tj.at("shape").get<std::vector<size_t>>();
      if (shape != t.shape) {
        throw DataError(source + ": tensor " + name + " has shape " + ShapeString(shape) +
                        ", config requires " + ShapeString(t.shape));
      }
      auto values = tj.at("values").get<std::vector<double>>();
      if (values.size() != t.size()) {
        throw DataError(source + ": tensor " + name + " has " + std::to_string(values.size()) +
                        " values, expected " + std::to_string(t.size()));
      }
      t.values = std::move(values);
      seen.insert(name);
    }
    for (const auto& t : ckpt.model.params()) {
      if (!seen.count(t.name)) throw DataError(source + ": tensor " + t.name + " is missing");
    }
    if (j.contains("candidates")) {
      ckpt.candidates.max_nugget_len = j["candidates"].at("max_nugget_len").get<int>();
      ckpt.candidates.expand = j["candidates"].at("expand").get<bool>();
    }
    ckpt.threshold = j.value("threshold", 0.5);
    if (j.contains("lexicon")) {
      std::string tsv;
      for (const auto& e : j["lexicon"]) {
        tsv += e.at(0).get<std::string>() + "\t" + std::to_string(e.at(1).get<int>()) + "\t" +
               std::to_string(e.at(2).get<int>()) + "\n";
      }
      ckpt.lexicon = TriggerLexicon::FromTsv(tsv, source + " (lexicon)");
    }
    return ckpt;
  } catch (const json::exception& e) {
    throw DataError(source + ": malformed checkpoint (" + e.what() + ")");
  }
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path, const ModelConfig* expected) {
  return CheckpointFromJson(ReadFile(path), path.string(), expected);
}

}  // namespace fbrnn
