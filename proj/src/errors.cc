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

#include "fbrnn/errors.h"

#include <atomic>
#include <iostream>

namespace fbrnn {

namespace {
std::atomic<bool> warnings_enabled{true};
}  // namespace

void Warn(const std::string& message) {
  if (warnings_enabled.load()) std::cerr << "warning: " << message << "\n";
}

void SetWarningsEnabled(bool enabled) { warnings_enabled.store(enabled); }

}  // namespace fbrnn
