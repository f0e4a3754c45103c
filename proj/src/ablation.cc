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

#include "fbrnn/ablation.h"

#include <cstdio>
#include <stdexcept>

namespace fbrnn {

const AblationCell& AblationGrid::at(CellKind cell, bool use_branch) const {
  for (const auto& c : cells) {
    if (c.cell == cell && c.use_branch == use_branch) return c;
  }
  throw std::logic_error("ablation grid is missing a configuration");
}

std::string AblationGrid::ToTable() const {
  std::string out =
      "+----------------+--------+--------+--------+\n"
      "| Configurations |      P |      R |     F1 |\n"
      "+----------------+--------+--------+--------+\n";
  char buf[160];
  for (const auto& c : cells) {
    const char* cell = c.cell == CellKind::kLstm ? "LSTM" : "GRU";
    const char* branch = c.use_branch ? "+branch" : "-branch";
    if (c.report) {
      std::snprintf(buf, sizeof(buf), "| %-4s | %-7s | %6.2f | %6.2f | %6.2f |\n", cell, branch,
                    100.0 * c.report->precision, 100.0 * c.report->recall,
                    100.0 * c.report->f1);
    } else {
      std::snprintf(buf, sizeof(buf), "| %-4s | %-7s | %6s | %6s | %6s |\n", cell, branch,
                    "fail", "fail", "fail");
    }
    out += buf;
  }
  out += "+----------------+--------+--------+--------+\n";
  return out;
}

nlohmann::json AblationGrid::ToJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json row = {{"cell", CellKindName(c.cell)},
                          {"branch", c.use_branch ? "+branch" : "-branch"}};
    if (c.report) {
      row["report"] = c.report->ToJson();
    } else {
      row["error"] = c.error;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

AblationGrid RunAblation(const Corpus& train, const Corpus& dev, const PipelineInputs& inputs,
                         const TrainConfig& base) {
  AblationGrid grid;
  size_t k = 0;
  for (CellKind cell : {CellKind::kLstm, CellKind::kGru}) {
    for (bool branch : {true, false}) {
      AblationCell& out = grid.cells[k++];
      out.cell = cell;
      out.use_branch = branch;
      TrainConfig cfg = base;
      cfg.model.cell = cell;
      cfg.model.use_branch = branch;
      try {
        PipelineResult r = TrainPipeline(train, &dev, inputs, cfg);
        Dataset dev_data = MakeDataset(dev, r.lexicon, cfg.candidates);
        out.report = Evaluate(r.model, dev_data, cfg.threshold);
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  }
  return grid;
}

}  // namespace fbrnn
