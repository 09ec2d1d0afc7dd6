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

#ifndef DSE_MODEL_HPP_
#define DSE_MODEL_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dse/autodiff.hpp"
#include "dse/checkpoint.hpp"
#include "dse/config.hpp"
#include "dse/task_io.hpp"
#include "dse/vocab.hpp"

namespace dse {

// A task split: cloze questions or anonymized relation instances.
struct Dataset {
  TaskType task = TaskType::kCloze;
  std::vector<heads::ClozeQuestion> cloze;
  std::vector<heads::RelationInstance> relations;

  std::size_t size() const { return task == TaskType::kCloze ? cloze.size() : relations.size(); }
  bool empty() const { return size() == 0; }
  // Every sentence the model would encode, in example order.
  std::vector<const DepSentence*> sentences() const;
};

Dataset make_cloze_dataset(std::vector<heads::ClozeQuestion> questions);
Dataset make_relation_dataset(const std::vector<heads::RelationRecord>& records);
Dataset load_dataset(const std::string& path);

class TaskMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads "form<TAB>v1 v2 ... vd" lines into a [|words| x d] table; forms not
// in the file keep a zero row.
ad::Tensor load_external_embeddings(const std::string& path, const Vocab& words, std::size_t dim);

class DseModel {
 public:
  // Vocabularies come from the training split only.
  static DseModel build(const ModelConfig& config, const Dataset& train);
  static DseModel from_checkpoint(const ad::Checkpoint& ckpt);
  ad::Checkpoint to_checkpoint() const;

  const ModelConfig& config() const { return config_; }
  ad::ParameterSet& params() { return params_; }
  const ad::ParameterSet& params() const { return params_; }
  const Vocab& words() const { return words_; }
  const Vocab& relations() const { return relations_; }

  // Final sentence representations, one [1 x 2H] row per sentence.
  ad::Var encode(ad::Tape& tape, std::span<const DepSentence* const> sentences);

  // [4Q x 1] option scores in question-major order.
  ad::Var cloze_scores(ad::Tape& tape, std::span<const heads::ClozeQuestion> questions);
  // [N x 5] logits.
  ad::Var relation_logits(ad::Tape& tape, std::span<const heads::RelationInstance> instances);

  // Mean task loss over the selected examples.
  ad::Var loss(ad::Tape& tape, const Dataset& data, std::span<const std::size_t> indices);
  // Predicted option index or relation class, one per selected example.
  std::vector<int> predict(const Dataset& data, std::span<const std::size_t> indices);

  // Language-model pre-training of the biLM encoder on raw word sequences.
  // Returns the mean loss of each epoch.
  std::vector<double> pretrain_bilm(const Dataset& train, std::size_t epochs, double lr);

 private:
  DseModel() = default;
  void init_params();

  ModelConfig config_;
  Vocab words_ = make_word_vocab();
  Vocab relations_ = make_relation_vocab();
  ad::ParameterSet params_;
};

}  // namespace dse

#endif  // DSE_MODEL_HPP_
