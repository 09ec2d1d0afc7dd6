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

#ifndef DSE_ENCODERS_HPP_
#define DSE_ENCODERS_HPP_

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dse/autodiff.hpp"
#include "dse/expansion.hpp"

namespace dse::nn {

using ad::ParameterSet;
using ad::Tape;
using ad::Tensor;
using ad::Var;

// as-written: every gate reads [C_{t-1}, h_{t-1}, x_t] and the output gate
// reads the fresh cell C_t. standard: gates read [h_{t-1}, x_t] only.
enum class LstmVariant { kAsWritten, kStandard };

enum class Fusion { kConcat, kGate, kHeadOnly, kWordOnly };

std::string_view to_string(LstmVariant v);
std::string_view to_string(Fusion f);
LstmVariant parse_lstm_variant(std::string_view s);
Fusion parse_fusion(std::string_view s);

// Input width of the recurrent layer for a fusion mode.
std::size_t fused_dim(Fusion fusion, std::size_t word_dim, std::size_t rel_dim);

// ---- initialisation --------------------------------------------------------

Tensor uniform_tensor(ad::Shape shape, double bound, std::mt19937_64& rng);
Tensor normal_tensor(ad::Shape shape, double stddev, std::mt19937_64& rng);

// Word table [V_w x d] and relation table [V_r x d_r], PAD rows zero.
// Without a word table (contextual encoders) a separate [1 x d] ROOT vector
// "embed.root" is created instead.
void add_embedding_params(ParameterSet& params, std::size_t word_vocab, std::size_t rel_vocab,
                          std::size_t word_dim, std::size_t rel_dim, bool word_table,
                          std::mt19937_64& rng);

// "<prefix>.W" holds the gate weights with column blocks [f | i | g | o].
// Row blocks are [C; h; x] for as-written and [h; x] for standard.
// "<prefix>.b" is the [1 x 4H] bias, forget block initialised to 1.
void add_lstm_params(ParameterSet& params, const std::string& prefix, std::size_t input_dim,
                     std::size_t hidden, LstmVariant variant, std::mt19937_64& rng);

// ---- fusion ----------------------------------------------------------------

Var fuse_concat(Var word, Var relation, Var head);
Var fuse_gate(Var word, Var relation, Var head);
Var fuse(Fusion fusion, Var word, Var relation, Var head);

// ---- recurrent cells -------------------------------------------------------

struct LstmState {
  Var h;
  Var c;
};

// One recurrent direction bound to a tape.
class LstmCell {
 public:
  LstmCell(Tape& tape, ParameterSet& params, const std::string& prefix, LstmVariant variant,
           bool frozen = false);

  std::size_t hidden() const { return hidden_; }
  std::size_t input_dim() const { return input_dim_; }
  LstmVariant variant() const { return variant_; }

  LstmState zero_state(std::size_t rows) const;
  // Rows whose mask entry is 0 keep `prev` unchanged. An empty mask updates
  // every row.
  LstmState step(const LstmState& prev, Var x, std::span<const double> mask = {}) const;

  // x W_x + b for any number of rows at once. step_projected() then only adds
  // the recurrent terms, so a whole sequence shares one big product.
  Var project(Var x) const;
  LstmState step_projected(const LstmState& prev, Var xw,
                           std::span<const double> mask = {}) const;

 private:
  Tape* tape_;
  LstmVariant variant_;
  std::size_t hidden_ = 0;
  std::size_t input_dim_ = 0;
  Var w_h_;
  Var w_x_;
  Var w_c_fig_;
  Var w_c_o_;
  Var bias_;
};

struct BiLstmOutput {
  // [B x 2H]: forward state at the last real position, backward state at
  // position 0.
  Var final;
  // Per time step, [B x H] each.
  std::vector<Var> forward;
  std::vector<Var> backward;

  // [T*B x 2H], time-major.
  Var positions() const;
};

// `inputs` is [T*B x in] in time-major order (row t*B + b); `mask` is the
// row-major [B x T] mask of a PackedBatch.
BiLstmOutput bilstm_encode(Tape& tape, ParameterSet& params, const std::string& prefix,
                           LstmVariant variant, Var inputs, std::size_t batch,
                           std::size_t steps, std::span<const double> mask);

// ---- biLM ------------------------------------------------------------------

struct BiLmDims {
  std::size_t vocab = 0;
  std::size_t embed_dim = 0;
  std::size_t hidden = 0;
};

// Parameters under "bilm.": shared word table, one standard LSTM per
// direction, and one output projection to the vocabulary.
void add_bilm_params(ParameterSet& params, const BiLmDims& dims, std::mt19937_64& rng);

// Word-id sequences padded into a PackedBatch (only word_ids and mask set).
PackedBatch pack_ids(const std::vector<std::vector<int>>& sequences);

// Negated forward + backward log-likelihood, averaged over real tokens.
Var bilm_loss(Tape& tape, ParameterSet& params, const PackedBatch& batch);

// Contextual vectors [T*B x 2H_lm], time-major: forward state after reading
// w_1..w_t concatenated with backward state after reading w_n..w_t. When
// frozen no gradient reaches the biLM parameters.
Var bilm_embed(Tape& tape, ParameterSet& params, const PackedBatch& batch, bool frozen);

}  // namespace dse::nn

#endif  // DSE_ENCODERS_HPP_
