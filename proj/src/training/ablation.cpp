// Copyright 2026 The DSE Authors.
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

#include "dse/ablation.hpp"

#include "json.hpp"

namespace dse {

std::string row_name(nn::Fusion fusion) {
  switch (fusion) {
    case nn::Fusion::kConcat: return "word+relation+head";
    case nn::Fusion::kGate: return "gate";
    case nn::Fusion::kHeadOnly: return "word+head";
    case nn::Fusion::kWordOnly: return "word-only";
  }
  return "word+relation+head";
}

double AblationRow::mean_accuracy() const {
  if (runs.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : runs) s += r.test.accuracy;
  return s / static_cast<double>(runs.size());
}

double AblationRow::mean_micro_f1() const {
  if (runs.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : runs) s += r.test.micro.f1;
  return s / static_cast<double>(runs.size());
}

std::vector<AblationRow> run_ablation(const ModelConfig& base, const Dataset& train_set,
                                      const Dataset& dev_set, const Dataset& test_set,
                                      const AblationOptions& options,
                                      const AblationProgress& progress) {
  std::vector<double> margins = options.margins;
  if (margins.empty()) margins.push_back(base.margin);
  std::vector<AblationRow> table;
  for (double margin : margins) {
    for (nn::Fusion fusion : options.fusions) {
      AblationRow row;
      row.name = row_name(fusion);
      if (margins.size() > 1) row.name += " margin=" + nlohmann::json(margin).dump();
      row.fusion = fusion;
      row.margin = margin;
      for (std::size_t s = 0; s < options.seeds; ++s) {
        ModelConfig cfg = base;
        cfg.fusion = fusion;
        cfg.margin = margin;
        cfg.seed = base.seed + s;
        if (fusion == nn::Fusion::kGate) cfg.rel_dim = cfg.word_dim;
        TrainResult tr = train(cfg, train_set, dev_set);
        AblationRun run;
        run.seed = cfg.seed;
        run.margin = margin;
        run.best_epoch = tr.best_epoch;
        run.test = evaluate(*tr.best, test_set);
        row.runs.push_back(run);
        if (progress) progress(row, run);
      }
      table.push_back(std::move(row));
    }
  }
  return table;
}

std::string to_jsonl(const std::vector<AblationRow>& table) {
  std::string out;
  for (const AblationRow& row : table) {
    nlohmann::ordered_json j;
    j["row"] = row.name;
    j["fusion"] = std::string(nn::to_string(row.fusion));
    j["margin"] = row.margin;
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const AblationRun& r : row.runs) {
      runs.push_back({{"seed", r.seed},
                      {"margin", r.margin},
                      {"best_epoch", r.best_epoch},
                      {"accuracy", r.test.accuracy},
                      {"micro_f1", r.test.micro.f1}});
    }
    j["runs"] = runs;
    j["mean_accuracy"] = row.mean_accuracy();
    j["mean_micro_f1"] = row.mean_micro_f1();
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace dse
