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

#include "fbrnn/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fbrnn/errors.h"

namespace fbrnn {

nlohmann::json PRFReport::ToJson() const {
  return {{"tp", true_positives}, {"pred", predicted}, {"gold", gold},
          {"p", precision},       {"r", recall},       {"f1", f1}};
}

std::vector<Mention> GoldMentions(const Corpus& corpus) {
  std::vector<Mention> out;
  for (size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& n : corpus.sentences[i].nuggets) {
      for (int t : n.types) out.push_back({i, n.start, n.end, t});
    }
  }
  return out;
}

PRFReport MakeReport(size_t tp, size_t predicted, size_t gold) {
  PRFReport r;
  r.true_positives = tp;
  r.predicted = predicted;
  r.gold = gold;
  r.precision = predicted == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(predicted);
  r.recall = gold == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(gold);
  const double s = r.precision + r.recall;
  r.f1 = s == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / s;
  return r;
}

PRFReport Score(std::vector<Mention> predicted, std::vector<Mention> gold,
                const ScoreOptions& options) {
  if (options.span_only) {
    for (auto& m : predicted) m.type = 0;
    for (auto& m : gold) m.type = 0;
  }
  std::sort(predicted.begin(), predicted.end());
  const size_t before = predicted.size();
  predicted.erase(std::unique(predicted.begin(), predicted.end()), predicted.end());
  const size_t duplicates = before - predicted.size();
  // Gold duplicates only arise in span-only mode from multi-typed spans.
  std::sort(gold.begin(), gold.end());
  gold.erase(std::unique(gold.begin(), gold.end()), gold.end());
  if (duplicates > 0 && !options.span_only) {
    Warn(std::to_string(duplicates) + " duplicate predicted mention(s) removed before scoring");
  }
  for (const auto& m : predicted) {
    if (m.type == 0 && !options.span_only) {
      throw DataError("predictions must not contain NON_EVENT mentions");
    }
  }
  std::vector<Mention> common;
  std::set_intersection(predicted.begin(), predicted.end(), gold.begin(), gold.end(),
                        std::back_inserter(common));
  PRFReport r = MakeReport(common.size(), predicted.size(), gold.size());
  r.duplicates_removed = duplicates;
  return r;
}

double F1Percent(double p, double r, int decimals) {
  if (p + r == 0.0) return 0.0;
  const double f = 2.0 * p * r / (p + r);
  const double scale = std::pow(10.0, decimals);
  return std::round(f * scale) / scale;
}

std::string FormatPRF(const PRFReport& report, int decimals) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "P=%.*f R=%.*f F1=%.*f", decimals, 100.0 * report.precision,
                decimals, 100.0 * report.recall, decimals, 100.0 * report.f1);
  return buf;
}

}  // namespace fbrnn
