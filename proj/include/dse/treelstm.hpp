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

#ifndef DSE_TREELSTM_HPP_
#define DSE_TREELSTM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dse/autodiff.hpp"
#include "dse/conllu.hpp"
#include "dse/model.hpp"

namespace dse::tree {

// Child-sum Tree-LSTM. Parameters reuse the standard LSTM layout:
// prefix.W is [(H + in) x 4H] with rows [U; W] and gate columns [f|i|u|o],
// prefix.b is [1 x 4H]. A node with one child is then exactly one standard
// LSTM step from that child's state.
void add_treelstm_params(ad::ParameterSet& params, const std::string& prefix,
                         std::size_t input_dim, std::size_t hidden, std::mt19937_64& rng);

// inputs holds one row per token in surface order. Returns the root's
// hidden state [1 x H].
ad::Var treelstm_encode(ad::Tape& tape, ad::ParameterSet& params, const std::string& prefix,
                        const DepSentence& sentence, ad::Var inputs);

struct BenchOptions {
  std::size_t hidden = 64;
  std::size_t epochs = 3;
  std::size_t batch = 16;
  std::size_t word_dim = 32;
  std::size_t rel_dim = 32;
  double lr = 0.05;
  std::uint64_t seed = 1;
  // Same gate form as the tree cell so the rows differ only in structure.
  nn::LstmVariant lstm_variant = nn::LstmVariant::kStandard;
};

struct BenchRow {
  std::string name;
  std::vector<double> epoch_seconds;
  double median_seconds = 0.0;
  std::size_t tokens_per_epoch = 0;
  double final_loss = 0.0;
};

class BenchMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Trains Tree-LSTM, Expansion-LSTM and both-concatenated models on the same
// data with the same hidden size and batch size, timing each epoch.
// Throws BenchMismatchError if rows saw different token counts.
std::vector<BenchRow> run_bench(const Dataset& data, const BenchOptions& options);

std::string to_jsonl(const std::vector<BenchRow>& rows);

}  // namespace dse::tree

#endif  // DSE_TREELSTM_HPP_
