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

#ifndef DSE_ABLATION_HPP_
#define DSE_ABLATION_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dse/training.hpp"

namespace dse {

struct AblationRun {
  std::uint64_t seed = 0;
  double margin = 0.0;
  Metrics test;
  std::size_t best_epoch = 0;
};

struct AblationRow {
  std::string name;
  nn::Fusion fusion = nn::Fusion::kConcat;
  double margin = 0.0;
  std::vector<AblationRun> runs;

  double mean_accuracy() const;
  double mean_micro_f1() const;
};

struct AblationOptions {
  // Default rows: full triple, word+head, word-only.
  std::vector<nn::Fusion> fusions = {nn::Fusion::kConcat, nn::Fusion::kHeadOnly,
                                     nn::Fusion::kWordOnly};
  std::size_t seeds = 3;
  // One block of rows per margin; empty means the base config's margin.
  std::vector<double> margins;
};

std::string row_name(nn::Fusion fusion);

using AblationProgress = std::function<void(const AblationRow&, const AblationRun&)>;

// Every row trains on the same splits; seeds are base, base+1, ...
std::vector<AblationRow> run_ablation(const ModelConfig& base, const Dataset& train_set,
                                      const Dataset& dev_set, const Dataset& test_set,
                                      const AblationOptions& options = {},
                                      const AblationProgress& progress = {});

// One JSON object per row with per-seed results and means.
std::string to_jsonl(const std::vector<AblationRow>& table);

}  // namespace dse

#endif  // DSE_ABLATION_HPP_
