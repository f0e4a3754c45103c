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

#include "fbrnn/run_config.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>

#include "fbrnn/errors.h"
#include "fbrnn/io.h"

namespace fbrnn {

namespace {

std::optional<bool> ParseBool(std::string_view v) {
  const std::string s = ToLower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  return std::nullopt;
}

std::optional<long long> ParseInt(std::string_view v) {
  long long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) return std::nullopt;
  return out;
}

std::optional<double> ParseDouble(std::string_view v) {
  double out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) return std::nullopt;
  return out;
}

}  // namespace

const std::vector<KeySpec>& RunConfig::Keys() {
  using K = KeyType;
  static const std::vector<KeySpec> keys = {
      // Model.
      {"cell", K::kString, "gru", "recurrent cell", {"gru", "lstm"}},
      {"word_dim", K::kInt, "300", "word embedding size", {}},
      {"branch_dim", K::kInt, "20", "branch embedding size", {}},
      {"use_branch", K::kBool, "true", "concatenate branch embeddings", {}},
      {"hidden", K::kInt, "64", "recurrent state size", {}},
      {"layers", K::kInt, "1", "stacked recurrent layers per branch", {}},
      {"head", K::kString, "softmax", "output layer", {"softmax", "sigmoid"}},
      {"head_hidden", K::kInt, "64", "width of the tanh layers in the head", {}},
      {"head_layers", K::kInt, "1", "number of tanh layers in the head", {}},
      {"dropout", K::kDouble, "0.5", "dropout on the concatenated branch states", {}},
      // Optimization.
      {"optimizer", K::kString, "adam", "update rule", {"adam", "sgd"}},
      {"lr", K::kDouble, "0.001", "Adam learning rate", {}},
      {"beta1", K::kDouble, "0.9", "Adam first-moment decay", {}},
      {"beta2", K::kDouble, "0.999", "Adam second-moment decay", {}},
      {"eps", K::kDouble, "1e-8", "Adam epsilon", {}},
      {"sgd_lr", K::kDouble, "0.1", "SGD learning rate", {}},
      {"clip_norm", K::kDouble, "5.0", "global gradient-norm clip (<= 0 disables)", {}},
      {"max_epochs", K::kInt, "50", "maximum training epochs", {}},
      {"patience", K::kInt, "5", "epochs without dev-F1 gain before stopping", {}},
      {"seed", K::kInt, "1", "seed for every stochastic step", {}},
      {"batch_size", K::kInt, "1", "examples per optimizer step", {}},
      {"neg_keep", K::kDouble, "1.0", "keep probability for NON_EVENT examples", {}},
      // Candidates and decoding.
      {"max_nugget_len", K::kInt, "3", "longest candidate span", {}},
      {"expand", K::kBool, "true", "POS-based multi-token expansion", {}},
      {"threshold", K::kDouble, "0.5", "sigmoid decision threshold", {}},
      {"span_only", K::kBool, "false", "score spans without types", {}},
      // Data.
      {"train", K::kPath, "", "training corpus (JSON lines)", {}},
      {"dev", K::kPath, "", "dev corpus (JSON lines)", {}},
      {"dev_fraction", K::kDouble, "0.2", "dev split taken from train when no dev corpus", {}},
      {"corpus", K::kPath, "", "corpus to process", {}},
      {"gold", K::kPath, "", "gold corpus for evaluation", {}},
      {"predictions", K::kPath, "", "predicted corpus for evaluation", {}},
      {"labels", K::kString, "", "label set: ace, ere or a JSON file", {}},
      {"embeddings", K::kPath, "", "word2vec text-format embeddings", {}},
      {"paraphrases", K::kPath, "", "source<TAB>paraphrase pairs", {}},
      {"lexicon", K::kPath, "", "trigger lexicon TSV", {}},
      {"checkpoint", K::kPath, "", "model checkpoint", {}},
      {"output_dir", K::kPath, "runs", "parent of generated run directories", {}},
      {"run_dir", K::kPath, "", "explicit run directory", {}},
      {"log_timing", K::kBool, "false", "write wall-clock seconds into train_log.csv", {}},
      // Synthetic data.
      {"preset", K::kString, "default", "built-in grammar", {"default", "positional"}},
      {"grammar", K::kPath, "", "JSON grammar file (overrides preset)", {}},
      {"sentences", K::kInt, "250", "number of sentences to generate", {}},
  };
  return keys;
}

const KeySpec& RunConfig::Spec(std::string_view key) {
  for (const auto& k : Keys()) {
    if (k.name == key) return k;
  }
  throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

void RunConfig::Set(std::string_view key, std::string_view raw) {
  const KeySpec& spec = Spec(key);
  const std::string value(Trim(raw));
  const std::string where = "key '" + spec.name + "'";
  switch (spec.type) {
    case KeyType::kInt:
      if (!ParseInt(value)) throw ConfigError(where + ": expected an integer, got '" + value + "'");
      break;
    case KeyType::kDouble:
      if (!ParseDouble(value)) throw ConfigError(where + ": expected a number, got '" + value + "'");
      break;
    case KeyType::kBool:
      if (!ParseBool(value)) throw ConfigError(where + ": expected true/false, got '" + value + "'");
      break;
    case KeyType::kString:
    case KeyType::kPath:
      break;
  }
  if (!spec.choices.empty() &&
      std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
    std::string opts;
    for (const auto& c : spec.choices) opts += (opts.empty() ? "" : "|") + c;
    throw ConfigError(where + ": '" + value + "' is not one of " + opts);
  }
  values_[spec.name] = value;
}

void RunConfig::ParseText(std::string_view text, const std::string& source) {
  const auto lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source + ":" + std::to_string(i + 1) + ": expected 'key = value'");
    }
    try {
      Set(Trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
}

void RunConfig::LoadFile(const std::filesystem::path& path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  ParseText(text, path.string());
}

std::string RunConfig::Get(std::string_view key) const {
  const KeySpec& spec = Spec(key);
  auto it = values_.find(spec.name);
  return it == values_.end() ? spec.default_value : it->second;
}

int RunConfig::GetInt(std::string_view key) const {
  auto v = ParseInt(Get(key));
  if (!v) throw ConfigError("key '" + std::string(key) + "' is not an integer");
  return static_cast<int>(*v);
}

double RunConfig::GetDouble(std::string_view key) const {
  auto v = ParseDouble(Get(key));
  if (!v) throw ConfigError("key '" + std::string(key) + "' is not a number");
  return *v;
}

bool RunConfig::GetBool(std::string_view key) const {
  auto v = ParseBool(Get(key));
  if (!v) throw ConfigError("key '" + std::string(key) + "' is not a boolean");
  return *v;
}

std::optional<std::filesystem::path> RunConfig::GetPath(std::string_view key) const {
  const std::string v = Get(key);
  if (v.empty()) return std::nullopt;
  return std::filesystem::path(v);
}

void RunConfig::RequireFiles(std::initializer_list<std::string_view> keys) const {
  for (auto key : keys) {
    auto p = GetPath(key);
    if (!p) throw ConfigError("missing required setting '" + std::string(key) + "'");
    if (!std::filesystem::is_regular_file(*p)) {
      throw ConfigError(std::string(key) + ": no such file " + p->string());
    }
  }
}

void RunConfig::CheckOptionalFiles(std::initializer_list<std::string_view> keys) const {
  for (auto key : keys) {
    auto p = GetPath(key);
    if (p && !std::filesystem::is_regular_file(*p)) {
      throw ConfigError(std::string(key) + ": no such file " + p->string());
    }
  }
}

TrainConfig RunConfig::ToTrainConfig() const {
  TrainConfig cfg;
  ModelConfig& m = cfg.model;
  m.cell = ParseCellKind(Get("cell"));
  m.word_dim = GetInt("word_dim");
  m.branch_dim = GetInt("branch_dim");
  m.use_branch = GetBool("use_branch");
  m.hidden = GetInt("hidden");
  m.layers = GetInt("layers");
  m.head = ParseHeadMode(Get("head"));
  m.head_hidden = GetInt("head_hidden");
  m.head_layers = GetInt("head_layers");
  m.dropout = GetDouble("dropout");
  cfg.optimizer.kind = ParseOptimizerKind(Get("optimizer"));
  cfg.optimizer.adam.lr = GetDouble("lr");
  cfg.optimizer.adam.beta1 = GetDouble("beta1");
  cfg.optimizer.adam.beta2 = GetDouble("beta2");
  cfg.optimizer.adam.eps = GetDouble("eps");
  cfg.optimizer.sgd_lr = GetDouble("sgd_lr");
  cfg.optimizer.clip_norm = GetDouble("clip_norm");
  cfg.max_epochs = GetInt("max_epochs");
  cfg.patience = GetInt("patience");
  const int seed = GetInt("seed");
  if (seed < 0) throw ConfigError("seed must be non-negative");
  cfg.seed = static_cast<uint64_t>(seed);
  cfg.batch_size = GetInt("batch_size");
  cfg.neg_keep = GetDouble("neg_keep");
  cfg.candidates.max_nugget_len = GetInt("max_nugget_len");
  cfg.candidates.expand = GetBool("expand");
  cfg.threshold = GetDouble("threshold");
  return cfg;
}

LabelSet RunConfig::Labels() const {
  const std::string v = Get("labels");
  if (v == "ace") return LabelSet::Ace2005();
  if (v == "ere") return LabelSet::RichEre2015();
  if (v.empty()) throw ConfigError("missing required setting 'labels' (ace, ere or a file)");
  if (!std::filesystem::is_regular_file(v)) throw ConfigError("labels: no such file " + v);
  return LabelSet::Load(v);
}

std::string RunConfig::Canonical() const {
  std::vector<std::string> lines;
  for (const auto& k : Keys()) {
    if (k.name == "run_dir" || k.name == "output_dir") continue;
    lines.push_back(k.name + " = " + Get(k.name));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::string RunConfig::Hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : Canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::filesystem::path RunConfig::ResolveRunDir() const {
  std::filesystem::path dir;
  if (auto explicit_dir = GetPath("run_dir")) {
    dir = *explicit_dir;
  } else {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%dT%H%M%SZ", &tm);
    dir = GetPath("output_dir").value_or("runs") / (Hash().substr(0, 8) + "-" + stamp);
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create run directory " + dir.string() + ": " + ec.message());
  return dir;
}

}  // namespace fbrnn
