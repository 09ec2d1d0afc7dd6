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

#ifndef DSE_CONFIG_HPP_
#define DSE_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "dse/encoders.hpp"

namespace dse {

enum class TaskType { kCloze, kRelation };
enum class EncoderKind { kRandomEmbed, kBiLm, kExternalFile };
enum class OptimizerKind { kSgd, kAdam };

std::string_view to_string(TaskType t);
std::string_view to_string(EncoderKind e);
std::string_view to_string(OptimizerKind o);

// Raised for any invalid or unreadable configuration; field() names the key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ModelConfig {
  TaskType task = TaskType::kCloze;
  EncoderKind encoder = EncoderKind::kRandomEmbed;
  nn::Fusion fusion = nn::Fusion::kConcat;
  nn::LstmVariant lstm_variant = nn::LstmVariant::kAsWritten;

  std::size_t word_dim = 32;
  std::size_t rel_dim = 200;  // gate fusion forces rel_dim = word_dim
  std::size_t hidden = 64;
  std::size_t lm_hidden = 16;

  double margin = 0.5;
  double lr = 0.1;
  OptimizerKind optimizer = OptimizerKind::kSgd;
  double warmup = 0.05;
  double clip = 5.0;
  std::size_t batch = 16;
  std::size_t max_len = 64;
  std::size_t epochs = 20;
  std::uint64_t seed = 1;

  bool freeze_bilm = false;
  std::size_t bilm_epochs = 5;
  double bilm_lr = 0.5;

  std::string train_path;
  std::string dev_path;
  std::string test_path;
  std::string embeddings_path;
  std::string out_dir = "runs";

  // Throws ConfigError naming the first bad field.
  void validate() const;
};

// Flat "key = value" text, '#' starts a comment. Unknown keys are errors.
// Explicit keys are recorded so gate fusion can tell a defaulted rel_dim
// from a conflicting one.
ModelConfig parse_config(const std::string& text, const std::string& base_dir = "");
ModelConfig load_config(const std::string& path);
std::string to_text(const ModelConfig& config);

// Applies one key/value pair; used by parse_config and by CLI overrides.
void set_config_field(ModelConfig& config, const std::string& key, const std::string& value,
                      const std::string& base_dir = "");

}  // namespace dse

#endif  // DSE_CONFIG_HPP_
