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

#ifndef FBRNN_ERRORS_H_
#define FBRNN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fbrnn {

// Bad configuration: unknown keys, inconsistent dimensions, invalid
// hyperparameters, checkpoint/config mismatch. CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invariant-violating input data. CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// NaN/Inf during training, failed gradient check. CLI exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes a warning line to stderr. Kept as a single sink so tools can
// silence it.
void Warn(const std::string& message);
void SetWarningsEnabled(bool enabled);

}  // namespace fbrnn

#endif  // FBRNN_ERRORS_H_
