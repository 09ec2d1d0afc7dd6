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

#include "dse/treelstm.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "json.hpp"
#include "dse/encoders.hpp"
#include "dse/optim.hpp"
#include "dse/task_heads.hpp"

namespace dse::tree {

using ad::Tape;
using ad::Tensor;
using ad::Var;

void add_treelstm_params(ad::ParameterSet& params, const std::string& prefix,
                         std::size_t input_dim, std::size_t hidden, std::mt19937_64& rng) {
  nn::add_lstm_params(params, prefix, input_dim, hidden, nn::LstmVariant::kStandard, rng);
}

Var treelstm_encode(Tape& tape, ad::ParameterSet& params, const std::string& prefix,
                    const DepSentence& sentence, Var inputs) {
  const Tensor& wv = params.get(prefix + ".W").value;
  const std::size_t H = params.get(prefix + ".b").value.cols() / 4;
  const std::size_t n = sentence.size();
  if (inputs.value().rows() != n || wv.rows() != H + inputs.value().cols()) {
    throw ad::ShapeError("treelstm_encode", inputs.shape(), wv.shape());
  }
  Var w = tape.param(params.get(prefix + ".W"));
  Var b = tape.param(params.get(prefix + ".b"));
  Var u_all = ad::slice(w, 0, 0, H);
  Var u_f = ad::slice(u_all, 1, 0, H);
  Var u_iuo = ad::slice(u_all, 1, H, 4 * H);
  // Input contributions for every node at once.
  Var xw = ad::add(ad::matmul(inputs, ad::slice(w, 0, H, wv.rows())), b);

  std::vector<std::vector<int>> children(n + 1);
  for (const Token& t : sentence.tokens) children[static_cast<std::size_t>(t.head)].push_back(t.index);

  // Post-order over the tree; each node is visited after its children.
  std::vector<int> order;
  std::vector<std::pair<int, bool>> stack = {{children[0].front(), false}};
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(node);
      continue;
    }
    stack.push_back({node, true});
    for (int c : children[static_cast<std::size_t>(node)]) stack.push_back({c, false});
  }

  std::vector<Var> h(n + 1), c(n + 1);
  for (int node : order) {
    const auto j = static_cast<std::size_t>(node);
    Var x = ad::slice(xw, 0, j - 1, j);
    Var x_f = ad::slice(x, 1, 0, H);
    Var x_iuo = ad::slice(x, 1, H, 4 * H);
    const auto& kids = children[j];
    Var iuo = x_iuo;
    Var c_new;
    if (!kids.empty()) {
      std::vector<Var> kh, kc;
      for (int k : kids) {
        kh.push_back(h[static_cast<std::size_t>(k)]);
        kc.push_back(c[static_cast<std::size_t>(k)]);
      }
      Var hs = kids.size() == 1 ? kh[0] : ad::concat(kh, 0);
      Var cs = kids.size() == 1 ? kc[0] : ad::concat(kc, 0);
      Var ones = tape.constant(Tensor({1, kids.size()}, 1.0));
      Var h_sum = kids.size() == 1 ? hs : ad::matmul(ones, hs);
      iuo = ad::add(iuo, ad::matmul(h_sum, u_iuo));
      // One forget gate per child.
      Var f = ad::sigmoid(ad::add(ad::matmul(hs, u_f), x_f));
      Var fc = ad::mul(f, cs);
      c_new = kids.size() == 1 ? fc : ad::matmul(ones, fc);
    }
    Var i = ad::sigmoid(ad::slice(iuo, 1, 0, H));
    Var u = ad::tanh(ad::slice(iuo, 1, H, 2 * H));
    Var o = ad::sigmoid(ad::slice(iuo, 1, 2 * H, 3 * H));
    Var iu = ad::mul(i, u);
    c[j] = c_new.valid() ? ad::add(iu, c_new) : iu;
    h[j] = ad::mul(o, ad::tanh(c[j]));
  }
  return h[static_cast<std::size_t>(children[0].front())];
}

namespace {

enum class Encoder { kTree, kExpansion, kBoth };

Var tree_reps(Tape& tape, DseModel& model, std::span<const DepSentence* const> sentences,
              std::size_t& tokens) {
  Var table = tape.param(model.params().get("embed.word"));
  std::vector<Var> roots;
  roots.reserve(sentences.size());
  for (const DepSentence* s : sentences) {
    std::vector<int> ids;
    for (const Token& t : s->tokens) ids.push_back(model.words().id(t.form));
    tokens += ids.size();
    roots.push_back(treelstm_encode(tape, model.params(), "tree", *s, ad::rows(table, ids)));
  }
  return ad::concat(roots, 0);
}

Var representations(Tape& tape, DseModel& model, Encoder enc,
                    std::span<const DepSentence* const> sentences, std::size_t& tokens) {
  if (enc == Encoder::kTree) return tree_reps(tape, model, sentences, tokens);
  std::size_t seq_tokens = 0;
  for (const DepSentence* s : sentences) seq_tokens += s->size();
  Var seq = model.encode(tape, sentences);
  if (enc == Encoder::kExpansion) {
    tokens += seq_tokens;
    return seq;
  }
  // Both encoders read the same tokens; count them once.
  std::size_t ignored = 0;
  Var t = tree_reps(tape, model, sentences, ignored);
  tokens += seq_tokens;
  return ad::concat({seq, t}, 1);
}

Var bench_loss(Tape& tape, DseModel& model, Encoder enc, const Dataset& data,
               std::span<const std::size_t> idx, std::size_t& tokens) {
  std::vector<const DepSentence*> sents;
  if (data.task == TaskType::kCloze) {
    std::vector<int> answers;
    for (std::size_t i : idx) {
      for (const auto& s : data.cloze[i].completions) sents.push_back(&s);
      answers.push_back(data.cloze[i].answer);
    }
    Var rep = representations(tape, model, enc, sents, tokens);
    Var u = tape.param(model.params().get(enc == Encoder::kTree ? "bench.tree.u"
                                          : enc == Encoder::kExpansion ? "bench.seq.u"
                                                                        : "bench.both.u"));
    return heads::completion_loss_batch(heads::score(rep, u), answers, model.config().margin);
  }
  std::vector<int> labels;
  for (std::size_t i : idx) {
    sents.push_back(&data.relations[i].sentence);
    labels.push_back(static_cast<int>(data.relations[i].label));
  }
  Var rep = representations(tape, model, enc, sents, tokens);
  const std::string name = enc == Encoder::kTree ? "bench.tree" : enc == Encoder::kExpansion
                                                                      ? "bench.seq"
                                                                      : "bench.both";
  return heads::relation_loss(rep, labels, tape.param(model.params().get(name + ".W")),
                              tape.param(model.params().get(name + ".b")));
}

}  // namespace

std::vector<BenchRow> run_bench(const Dataset& data, const BenchOptions& options) {
  if (data.empty()) throw std::invalid_argument("bench: empty dataset");
  ModelConfig cfg;
  cfg.task = data.task;
  cfg.fusion = nn::Fusion::kConcat;
  cfg.word_dim = options.word_dim;
  cfg.rel_dim = options.rel_dim;
  cfg.hidden = options.hidden;
  cfg.batch = options.batch;
  cfg.seed = options.seed;
  cfg.lr = options.lr;
  cfg.lstm_variant = options.lstm_variant;

  const std::size_t H = options.hidden;
  const std::vector<std::pair<std::string, Encoder>> rows = {
      {"tree-lstm", Encoder::kTree},
      {"expansion-lstm", Encoder::kExpansion},
      {"expansion+tree", Encoder::kBoth}};
  // Length-bucketed batches, shared by every row. The tree encoder never pads;
  // without sorting the sequence encoder would spend ~15% of its slots on pads.
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  {
    // Cloze examples carry one sentence per candidate; the first stands in.
    const auto sentences = data.sentences();
    const std::size_t stride = sentences.size() / data.size();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return sentences[a * stride]->size() < sentences[b * stride]->size();
    });
  }
  std::vector<BenchRow> out;
  for (const auto& [name, enc] : rows) {
    DseModel model = DseModel::build(cfg, data);
    std::mt19937_64 rng(options.seed + 17);
    add_treelstm_params(model.params(), "tree", options.word_dim, H, rng);
    const std::size_t width[] = {H, 2 * H, 3 * H};
    const char* const prefix[] = {"bench.tree", "bench.seq", "bench.both"};
    const auto e = static_cast<std::size_t>(enc);
    if (data.task == TaskType::kCloze) {
      model.params().add(std::string(prefix[e]) + ".u", Tensor({width[e], 1}));
    } else {
      model.params().add(std::string(prefix[e]) + ".W", Tensor({width[e], heads::kRelationClasses}));
      model.params().add(std::string(prefix[e]) + ".b", Tensor({1, heads::kRelationClasses}));
    }

    BenchRow row;
    row.name = name;
    Optimizer opt(OptimizerKind::kSgd, options.lr, 0.0, 1);
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
      std::size_t tokens = 0;
      double loss_sum = 0.0;
      const auto t0 = std::chrono::steady_clock::now();
      for (std::size_t start = 0; start < order.size(); start += options.batch) {
        const std::span<const std::size_t> idx(order.data() + start,
                                               std::min(options.batch, order.size() - start));
        model.params().zero_grad();
        Tape tape;
        Var l = bench_loss(tape, model, enc, data, idx, tokens);
        tape.backward(l);
        clip_grad_norm(model.params(), 5.0);
        opt.step(model.params());
        loss_sum += l.value().item() * static_cast<double>(idx.size());
      }
      row.epoch_seconds.push_back(
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      if (epoch > 0 && tokens != row.tokens_per_epoch) {
        throw BenchMismatchError("bench: token count changed between epochs");
      }
      row.tokens_per_epoch = tokens;
      row.final_loss = loss_sum / static_cast<double>(data.size());
    }
    std::vector<double> sorted = row.epoch_seconds;
    std::sort(sorted.begin(), sorted.end());
    if (!sorted.empty()) {
      const std::size_t m = sorted.size() / 2;
      row.median_seconds = sorted.size() % 2 ? sorted[m] : 0.5 * (sorted[m - 1] + sorted[m]);
    }
    out.push_back(std::move(row));
  }
  for (const BenchRow& r : out) {
    if (r.tokens_per_epoch != out.front().tokens_per_epoch) {
      throw BenchMismatchError("bench: rows processed different token counts (" + r.name + ": " +
                               std::to_string(r.tokens_per_epoch) + " vs " +
                               std::to_string(out.front().tokens_per_epoch) + ")");
    }
  }
  return out;
}

std::string to_jsonl(const std::vector<BenchRow>& rows) {
  std::string out;
  const BenchRow* seq = nullptr;
  for (const BenchRow& r : rows) {
    if (r.name == "expansion-lstm") seq = &r;
  }
  for (const BenchRow& r : rows) {
    nlohmann::ordered_json j;
    j["row"] = r.name;
    j["epoch_seconds"] = r.epoch_seconds;
    j["median_seconds"] = r.median_seconds;
    j["tokens_per_epoch"] = r.tokens_per_epoch;
    j["final_loss"] = r.final_loss;
    if (seq && seq->median_seconds > 0.0) j["ratio_to_expansion"] = r.median_seconds / seq->median_seconds;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace dse::tree
