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

#ifndef FBRNN_RUN_CONFIG_H_
#define FBRNN_RUN_CONFIG_H_

// Flat `key = value` run configuration shared by every CLI subcommand.
// Comments start with '#'. Unknown keys are rejected; values are type
// checked on assignment. Command-line flags override file values.

#include <filesystem>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fbrnn/corpus.h"
#include "fbrnn/training.h"

namespace fbrnn {

enum class KeyType { kInt, kDouble, kBool, kString, kPath };

struct KeySpec {
  std::string name;
  KeyType type;
  std::string default_value;
  std::string help;
  std::vector<std::string> choices;  // empty: any value of the type
};

class RunConfig {
 public:
  static const std::vector<KeySpec>& Keys();
  static const KeySpec& Spec(std::string_view key);

  void Set(std::string_view key, std::string_view value);
  bool IsSet(std::string_view key) const { return values_.count(std::string(key)) > 0; }
  void ParseText(std::string_view text, const std::string& source);
  void LoadFile(const std::filesystem::path& path);

  std::string Get(std::string_view key) const;
  int GetInt(std::string_view key) const;
  double GetDouble(std::string_view key) const;
  bool GetBool(std::string_view key) const;
  std::optional<std::filesystem::path> GetPath(std::string_view key) const;

  // Each listed path key must be set and name an existing file.
  void RequireFiles(std::initializer_list<std::string_view> keys) const;
  // Optional path keys that are set must exist.
  void CheckOptionalFiles(std::initializer_list<std::string_view> keys) const;

  TrainConfig ToTrainConfig() const;
  // "ace", "ere" or a label-file path.
  LabelSet Labels() const;

  // Every key with its effective value, sorted, one `key = value` per line.
  std::string Canonical() const;
  // 16 hex digits of FNV-1a 64 over Canonical().
  std::string Hash() const;

  // `run_dir` if set, else <output_dir>/<hash[0:8]>-<UTC timestamp>.
  // The directory is created.
  std::filesystem::path ResolveRunDir() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace fbrnn

#endif  // FBRNN_RUN_CONFIG_H_
