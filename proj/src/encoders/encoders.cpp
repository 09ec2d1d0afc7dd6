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

#include "dse/encoders.hpp"

#include <algorithm>
#include <stdexcept>

namespace dse::nn {

std::string_view to_string(LstmVariant v) {
  return v == LstmVariant::kAsWritten ? "as-written" : "standard";
}

std::string_view to_string(Fusion f) {
  switch (f) {
    case Fusion::kConcat: return "concat";
    case Fusion::kGate: return "gate";
    case Fusion::kHeadOnly: return "head-only";
    case Fusion::kWordOnly: return "word-only";
  }
  return "concat";
}

LstmVariant parse_lstm_variant(std::string_view s) {
  if (s == "as-written") return LstmVariant::kAsWritten;
  if (s == "standard") return LstmVariant::kStandard;
  throw std::invalid_argument("unknown lstm variant '" + std::string(s) + "'");
}

Fusion parse_fusion(std::string_view s) {
  if (s == "concat") return Fusion::kConcat;
  if (s == "gate") return Fusion::kGate;
  if (s == "head-only") return Fusion::kHeadOnly;
  if (s == "word-only") return Fusion::kWordOnly;
  throw std::invalid_argument("unknown fusion '" + std::string(s) + "'");
}

std::size_t fused_dim(Fusion fusion, std::size_t word_dim, std::size_t rel_dim) {
  switch (fusion) {
    case Fusion::kConcat: return 2 * word_dim + rel_dim;
    case Fusion::kGate: return word_dim;
    case Fusion::kHeadOnly: return 2 * word_dim;
    case Fusion::kWordOnly: return word_dim;
  }
  return word_dim;
}

Tensor uniform_tensor(ad::Shape shape, double bound, std::mt19937_64& rng) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

Tensor normal_tensor(ad::Shape shape, double stddev, std::mt19937_64& rng) {
  Tensor t(std::move(shape));
  std::normal_distribution<double> dist(0.0, stddev);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

void add_embedding_params(ParameterSet& params, std::size_t word_vocab, std::size_t rel_vocab,
                          std::size_t word_dim, std::size_t rel_dim, bool word_table,
                          std::mt19937_64& rng) {
  if (word_dim == 0 || rel_dim == 0) throw std::invalid_argument("embedding dims must be positive");
  if (word_table) {
    Tensor words = normal_tensor({word_vocab, word_dim}, 0.1, rng);
    for (std::size_t c = 0; c < word_dim; ++c) words(word_ids::kPad, c) = 0.0;
    params.add("embed.word", std::move(words));
  } else {
    params.add("embed.root", normal_tensor({1, word_dim}, 0.1, rng));
  }
  Tensor rels = normal_tensor({rel_vocab, rel_dim}, 0.1, rng);
  for (std::size_t c = 0; c < rel_dim; ++c) rels(rel_ids::kPad, c) = 0.0;
  params.add("embed.relation", std::move(rels));
}

void add_lstm_params(ParameterSet& params, const std::string& prefix, std::size_t input_dim,
                     std::size_t hidden, LstmVariant variant, std::mt19937_64& rng) {
  if (hidden == 0 || input_dim == 0) throw std::invalid_argument("lstm dims must be positive");
  const std::size_t rows = (variant == LstmVariant::kAsWritten ? 2 * hidden : hidden) + input_dim;
  params.add(prefix + ".W", uniform_tensor({rows, 4 * hidden}, 0.08, rng));
  Tensor bias({1, 4 * hidden});
  for (std::size_t c = 0; c < hidden; ++c) bias[c] = 1.0;
  params.add(prefix + ".b", std::move(bias));
}

// ---- fusion ----------------------------------------------------------------

Var fuse_concat(Var word, Var relation, Var head) {
  if (word.shape() != head.shape()) throw ad::ShapeError("fuse_concat", word.shape(), head.shape());
  return ad::concat({word, relation, head}, 1);
}

Var fuse_gate(Var word, Var relation, Var head) {
  if (relation.shape() != word.shape()) {
    throw ad::ShapeError("fuse_gate", word.shape(), relation.shape());
  }
  if (word.shape() != head.shape()) throw ad::ShapeError("fuse_gate", word.shape(), head.shape());
  return ad::add(word, ad::mul(ad::sigmoid(relation), head));
}

Var fuse(Fusion fusion, Var word, Var relation, Var head) {
  switch (fusion) {
    case Fusion::kConcat: return fuse_concat(word, relation, head);
    case Fusion::kGate: return fuse_gate(word, relation, head);
    case Fusion::kHeadOnly:
      if (word.shape() != head.shape()) throw ad::ShapeError("fuse", word.shape(), head.shape());
      return ad::concat({word, head}, 1);
    case Fusion::kWordOnly: return word;
  }
  return word;
}

// ---- LSTM ------------------------------------------------------------------

LstmCell::LstmCell(Tape& tape, ParameterSet& params, const std::string& prefix,
                   LstmVariant variant, bool frozen)
    : tape_(&tape), variant_(variant) {
  ad::Parameter& w = params.get(prefix + ".W");
  ad::Parameter& b = params.get(prefix + ".b");
  if (b.value.rank() != 2 || b.value.cols() % 4 != 0) {
    throw ad::ShapeError("lstm", "bias of " + prefix + " is " + ad::shape_string(b.value.shape()));
  }
  hidden_ = b.value.cols() / 4;
  const std::size_t state_rows = variant == LstmVariant::kAsWritten ? 2 * hidden_ : hidden_;
  if (w.value.cols() != 4 * hidden_ || w.value.rows() <= state_rows) {
    throw ad::ShapeError("lstm", w.value.shape(), b.value.shape());
  }
  input_dim_ = w.value.rows() - state_rows;
  Var weights = tape.param(w, frozen);
  bias_ = tape.param(b, frozen);
  if (variant == LstmVariant::kAsWritten) {
    Var cell_rows = ad::slice(weights, 0, 0, hidden_);
    w_c_fig_ = ad::slice(cell_rows, 1, 0, 3 * hidden_);
    w_c_o_ = ad::slice(cell_rows, 1, 3 * hidden_, 4 * hidden_);
  }
  const std::size_t h0 = state_rows - hidden_;
  w_h_ = ad::slice(weights, 0, h0, state_rows);
  w_x_ = ad::slice(weights, 0, state_rows, w.value.rows());
}

LstmState LstmCell::zero_state(std::size_t rows) const {
  return {tape_->constant(Tensor({rows, hidden_})), tape_->constant(Tensor({rows, hidden_}))};
}

Var LstmCell::project(Var x) const { return ad::add(ad::matmul(x, w_x_), bias_); }

LstmState LstmCell::step(const LstmState& prev, Var x, std::span<const double> mask) const {
  return step_projected(prev, project(x), mask);
}

LstmState LstmCell::step_projected(const LstmState& prev, Var xw,
                                   std::span<const double> mask) const {
  const std::size_t H = hidden_;
  Var pre = ad::add(xw, ad::matmul(prev.h, w_h_));
  Var f, i, g, o, c;
  if (variant_ == LstmVariant::kAsWritten) {
    Var fig = ad::add(ad::slice(pre, 1, 0, 3 * H), ad::matmul(prev.c, w_c_fig_));
    f = ad::sigmoid(ad::slice(fig, 1, 0, H));
    i = ad::sigmoid(ad::slice(fig, 1, H, 2 * H));
    g = ad::tanh(ad::slice(fig, 1, 2 * H, 3 * H));
    c = ad::add(ad::mul(i, g), ad::mul(f, prev.c));
    o = ad::sigmoid(ad::add(ad::slice(pre, 1, 3 * H, 4 * H), ad::matmul(c, w_c_o_)));
  } else {
    f = ad::sigmoid(ad::slice(pre, 1, 0, H));
    i = ad::sigmoid(ad::slice(pre, 1, H, 2 * H));
    g = ad::tanh(ad::slice(pre, 1, 2 * H, 3 * H));
    o = ad::sigmoid(ad::slice(pre, 1, 3 * H, 4 * H));
    c = ad::add(ad::mul(i, g), ad::mul(f, prev.c));
  }
  Var h = ad::mul(o, ad::tanh(c));
  if (mask.empty()) return {h, c};
  return {ad::blend(mask, h, prev.h), ad::blend(mask, c, prev.c)};
}

Var BiLstmOutput::positions() const {
  std::vector<Var> rows;
  rows.reserve(forward.size());
  for (std::size_t t = 0; t < forward.size(); ++t) {
    rows.push_back(ad::concat({forward[t], backward[t]}, 1));
  }
  return ad::concat(rows, 0);
}

namespace {

// Mask column for time step t from a row-major [B x T] mask.
std::vector<double> mask_column(std::span<const double> mask, std::size_t batch,
                                std::size_t steps, std::size_t t) {
  std::vector<double> col(batch);
  for (std::size_t b = 0; b < batch; ++b) col[b] = mask[b * steps + t];
  return col;
}

}  // namespace

BiLstmOutput bilstm_encode(Tape& tape, ParameterSet& params, const std::string& prefix,
                           LstmVariant variant, Var inputs, std::size_t batch,
                           std::size_t steps, std::span<const double> mask) {
  if (batch == 0 || steps == 0) throw std::invalid_argument("bilstm_encode: empty batch");
  if (inputs.value().rows() != batch * steps) {
    throw ad::ShapeError("bilstm_encode", "inputs " + ad::shape_string(inputs.shape()) +
                                              " for batch " + std::to_string(batch) +
                                              " x steps " + std::to_string(steps));
  }
  if (mask.size() != batch * steps) throw ad::ShapeError("bilstm_encode", "mask size mismatch");
  LstmCell fwd(tape, params, prefix + ".fwd", variant);
  LstmCell bwd(tape, params, prefix + ".bwd", variant);

  Var fwd_xw = fwd.project(inputs);
  Var bwd_xw = bwd.project(inputs);
  std::vector<std::vector<double>> masks;
  for (std::size_t t = 0; t < steps; ++t) masks.push_back(mask_column(mask, batch, steps, t));
  auto at = [&](Var xw, std::size_t t) { return ad::slice(xw, 0, t * batch, (t + 1) * batch); };

  BiLstmOutput out;
  out.forward.resize(steps);
  out.backward.resize(steps);
  LstmState s = fwd.zero_state(batch);
  for (std::size_t t = 0; t < steps; ++t) {
    s = fwd.step_projected(s, at(fwd_xw, t), masks[t]);
    out.forward[t] = s.h;
  }
  LstmState r = bwd.zero_state(batch);
  for (std::size_t t = steps; t-- > 0;) {
    r = bwd.step_projected(r, at(bwd_xw, t), masks[t]);
    out.backward[t] = r.h;
  }
  out.final = ad::concat({out.forward.back(), out.backward.front()}, 1);
  return out;
}

// ---- biLM ------------------------------------------------------------------

void add_bilm_params(ParameterSet& params, const BiLmDims& dims, std::mt19937_64& rng) {
  if (dims.vocab == 0 || dims.embed_dim == 0 || dims.hidden == 0) {
    throw std::invalid_argument("bilm dims must be positive");
  }
  Tensor embed = normal_tensor({dims.vocab, dims.embed_dim}, 0.1, rng);
  for (std::size_t c = 0; c < dims.embed_dim; ++c) embed(word_ids::kPad, c) = 0.0;
  params.add("bilm.embed", std::move(embed));
  add_lstm_params(params, "bilm.fwd", dims.embed_dim, dims.hidden, LstmVariant::kStandard, rng);
  add_lstm_params(params, "bilm.bwd", dims.embed_dim, dims.hidden, LstmVariant::kStandard, rng);
  params.add("bilm.proj.W", uniform_tensor({dims.hidden, dims.vocab}, 0.08, rng));
  params.add("bilm.proj.b", Tensor({1, dims.vocab}));
}

PackedBatch pack_ids(const std::vector<std::vector<int>>& sequences) {
  if (sequences.empty()) throw std::invalid_argument("empty batch");
  PackedBatch batch;
  batch.batch = sequences.size();
  for (const auto& s : sequences) batch.width = std::max(batch.width, s.size());
  if (batch.width == 0) throw std::invalid_argument("empty batch");
  const std::size_t cells = batch.batch * batch.width;
  batch.word_ids.assign(cells, word_ids::kPad);
  batch.rel_ids.assign(cells, rel_ids::kPad);
  batch.head_index.assign(cells, kPadHead);
  batch.mask.assign(cells, 0.0);
  for (std::size_t b = 0; b < batch.batch; ++b) {
    batch.lengths.push_back(sequences[b].size());
    for (std::size_t t = 0; t < sequences[b].size(); ++t) {
      batch.word_ids[batch.at(b, t)] = sequences[b][t];
      batch.mask[batch.at(b, t)] = 1.0;
    }
  }
  return batch;
}

namespace {

struct LmRun {
  // Hidden state before / after consuming the token at each time step.
  std::vector<Var> before;
  std::vector<Var> after;
};

struct LmPass {
  LmRun forward;
  LmRun backward;
  std::vector<int> ids_tm;
  std::vector<double> mask_tm;
};

LmRun run_direction(const LstmCell& cell, Var start_token, Var embedded, std::size_t batch,
                    std::size_t steps, std::span<const double> mask, bool reverse) {
  LmRun run;
  run.before.resize(steps);
  run.after.resize(steps);
  LstmState s = cell.step(cell.zero_state(batch), start_token);
  for (std::size_t k = 0; k < steps; ++k) {
    const std::size_t t = reverse ? steps - 1 - k : k;
    run.before[t] = s.h;
    Var x = ad::slice(embedded, 0, t * batch, (t + 1) * batch);
    s = cell.step(s, x, mask_column(mask, batch, steps, t));
    run.after[t] = s.h;
  }
  return run;
}

LmPass run_bilm(Tape& tape, ParameterSet& params, const PackedBatch& batch, bool frozen) {
  if (batch.batch == 0 || batch.width == 0) throw std::invalid_argument("empty batch");
  const std::size_t B = batch.batch, T = batch.width;
  LmPass pass;
  pass.ids_tm.resize(B * T);
  pass.mask_tm.resize(B * T);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t b = 0; b < B; ++b) {
      pass.ids_tm[t * B + b] = batch.word_ids[batch.at(b, t)];
      pass.mask_tm[t * B + b] = batch.mask[batch.at(b, t)];
    }
  }
  Var table = tape.param(params.get("bilm.embed"), frozen);
  Var embedded = ad::rows(table, pass.ids_tm);
  const std::vector<int> bos(B, word_ids::kBos), eos(B, word_ids::kEos);
  LstmCell fwd(tape, params, "bilm.fwd", LstmVariant::kStandard, frozen);
  LstmCell bwd(tape, params, "bilm.bwd", LstmVariant::kStandard, frozen);
  pass.forward = run_direction(fwd, ad::rows(table, bos), embedded, B, T, batch.mask, false);
  pass.backward = run_direction(bwd, ad::rows(table, eos), embedded, B, T, batch.mask, true);
  return pass;
}

}  // namespace

Var bilm_loss(Tape& tape, ParameterSet& params, const PackedBatch& batch) {
  LmPass pass = run_bilm(tape, params, batch, false);
  Var proj_w = tape.param(params.get("bilm.proj.W"));
  Var proj_b = tape.param(params.get("bilm.proj.b"));
  Var fwd_logits = ad::add(ad::matmul(ad::concat(pass.forward.before, 0), proj_w), proj_b);
  Var bwd_logits = ad::add(ad::matmul(ad::concat(pass.backward.before, 0), proj_w), proj_b);
  return ad::add(ad::nll_loss(fwd_logits, pass.ids_tm, pass.mask_tm),
                 ad::nll_loss(bwd_logits, pass.ids_tm, pass.mask_tm));
}

Var bilm_embed(Tape& tape, ParameterSet& params, const PackedBatch& batch, bool frozen) {
  LmPass pass = run_bilm(tape, params, batch, frozen);
  std::vector<Var> rows;
  rows.reserve(batch.width);
  for (std::size_t t = 0; t < batch.width; ++t) {
    rows.push_back(ad::concat({pass.forward.after[t], pass.backward.after[t]}, 1));
  }
  return ad::concat(rows, 0);
}

}  // namespace dse::nn
