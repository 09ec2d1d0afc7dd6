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

#ifndef DSE_TRAINING_HPP_
#define DSE_TRAINING_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dse/model.hpp"
#include "dse/task_heads.hpp"

namespace dse {

struct ClassScores {
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

// precision, recall and F1 from raw counts; empty denominators give 0.
ClassScores score_counts(std::size_t tp, std::size_t fp, std::size_t fn);

struct Metrics {
  TaskType task = TaskType::kCloze;
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  double loss = 0.0;
  // Relation task only. micro excludes the negative class.
  std::array<ClassScores, heads::kRelationClasses> per_class{};
  ClassScores micro;

  // Dev-selection metric: accuracy for cloze, micro-F1 for relations.
  double headline() const { return task == TaskType::kCloze ? accuracy : micro.f1; }
};

Metrics cloze_metrics(std::span<const int> gold, std::span<const int> predicted);
Metrics relation_metrics(std::span<const int> gold, std::span<const int> predicted);

// Throws TaskMismatchError when the model and data tasks differ.
Metrics evaluate(DseModel& model, const Dataset& data, std::size_t batch = 64);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double dev_metric = 0.0;
  double dev_loss = 0.0;
  double grad_norm = 0.0;
  double seconds = 0.0;
};

class TrainingDivergedError : public std::runtime_error {
 public:
  TrainingDivergedError(std::size_t epoch, std::size_t batch, const std::string& details);
  std::size_t epoch() const { return epoch_; }
  std::size_t batch() const { return batch_; }

 private:
  std::size_t epoch_, batch_;
};

struct TrainResult {
  std::optional<DseModel> best;
  std::size_t best_epoch = 0;
  Metrics best_dev;
  std::vector<EpochRecord> history;
  std::vector<double> bilm_history;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Mini-batch training with best-dev selection. Deterministic given the seed.
TrainResult train(const ModelConfig& config, const Dataset& train_set, const Dataset& dev_set,
                  const EpochCallback& on_epoch = {});

std::string to_json(const Metrics& m);
std::string to_json(const EpochRecord& r);

}  // namespace dse

#endif  // DSE_TRAINING_HPP_
