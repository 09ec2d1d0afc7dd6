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

#include "dse/model.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "dse/encoders.hpp"
#include "dse/expansion.hpp"
#include "dse/optim.hpp"
#include "dse/task_heads.hpp"

namespace dse {

using ad::Tape;
using ad::Tensor;
using ad::Var;

std::vector<const DepSentence*> Dataset::sentences() const {
  std::vector<const DepSentence*> out;
  if (task == TaskType::kCloze) {
    for (const auto& q : cloze) {
      for (const auto& s : q.completions) out.push_back(&s);
    }
  } else {
    for (const auto& r : relations) out.push_back(&r.sentence);
  }
  return out;
}

Dataset make_cloze_dataset(std::vector<heads::ClozeQuestion> questions) {
  Dataset d;
  d.task = TaskType::kCloze;
  d.cloze = std::move(questions);
  return d;
}

Dataset make_relation_dataset(const std::vector<heads::RelationRecord>& records) {
  Dataset d;
  d.task = TaskType::kRelation;
  d.relations.reserve(records.size());
  for (const auto& r : records) d.relations.push_back(heads::to_instance(r));
  return d;
}

Dataset load_dataset(const std::string& path) {
  if (heads::detect_task(path) == heads::TaskKind::kCloze) {
    return make_cloze_dataset(heads::load_cloze(path));
  }
  return make_relation_dataset(heads::load_relations(path));
}

Tensor load_external_embeddings(const std::string& path, const Vocab& words, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read embeddings file '" + path + "'");
  Tensor table({words.size(), dim});
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected form<TAB>vector");
    }
    const std::string form = line.substr(0, tab);
    std::istringstream values(line.substr(tab + 1));
    std::vector<double> v;
    double x;
    while (values >> x) v.push_back(x);
    if (v.size() != dim) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(dim) + " values, got " + std::to_string(v.size()));
    }
    if (!words.contains(form)) continue;
    const auto row = static_cast<std::size_t>(words.id(form));
    for (std::size_t c = 0; c < dim; ++c) table(row, c) = v[c];
  }
  return table;
}

DseModel DseModel::build(const ModelConfig& config, const Dataset& train) {
  config.validate();
  if (train.task != config.task) {
    throw TaskMismatchError("training data is " + std::string(to_string(train.task)) +
                            " but config task is " + std::string(to_string(config.task)));
  }
  DseModel m;
  m.config_ = config;
  for (const DepSentence* s : train.sentences()) {
    for (const Token& t : s->tokens) {
      m.words_.intern(t.form);
      m.relations_.intern(t.head == 0 ? std::string_view("root") : std::string_view(t.deprel));
    }
  }
  m.init_params();
  return m;
}

void DseModel::init_params() {
  std::mt19937_64 rng(config_.seed);
  const ModelConfig& c = config_;
  const bool word_table = c.encoder == EncoderKind::kRandomEmbed;
  nn::add_embedding_params(params_, words_.size(), relations_.size(), c.word_dim, c.rel_dim,
                           word_table, rng);
  if (c.encoder == EncoderKind::kBiLm) {
    nn::add_bilm_params(params_, {words_.size(), c.word_dim, c.lm_hidden}, rng);
  } else if (c.encoder == EncoderKind::kExternalFile) {
    params_.add("embed.external", load_external_embeddings(c.embeddings_path, words_, c.word_dim),
                /*trainable=*/false);
  }
  const std::size_t in = nn::fused_dim(c.fusion, c.word_dim, c.rel_dim);
  nn::add_lstm_params(params_, "enc.fwd", in, c.hidden, c.lstm_variant, rng);
  nn::add_lstm_params(params_, "enc.bwd", in, c.hidden, c.lstm_variant, rng);
  // Output layers start at zero: every option or class ties, so an untrained
  // model answers with index 0.
  if (c.task == TaskType::kCloze) {
    params_.add("head.u", Tensor({2 * c.hidden, 1}));
  } else {
    params_.add("head.W", Tensor({2 * c.hidden, heads::kRelationClasses}));
    params_.add("head.b", Tensor({1, heads::kRelationClasses}));
  }
}

Var DseModel::encode(Tape& tape, std::span<const DepSentence* const> sentences) {
  std::vector<ExpandedSentence> expanded;
  expanded.reserve(sentences.size());
  for (const DepSentence* s : sentences) expanded.push_back(expand(*s, relations_));
  const PackedBatch pb = batch_pack(expanded, config_.max_len, words_);
  const std::size_t B = pb.batch, T = pb.width;
  const int root_row = static_cast<int>(T * B);

  std::vector<int> word_tm(T * B), rel_tm(T * B), head_tm(T * B);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t b = 0; b < B; ++b) {
      const std::size_t cell = pb.at(b, t);
      const std::size_t row = t * B + b;
      word_tm[row] = pb.word_ids[cell];
      rel_tm[row] = pb.rel_ids[cell];
      const int h = pb.head_index[cell];
      head_tm[row] = h >= 0 ? h * static_cast<int>(B) + static_cast<int>(b) : root_row;
    }
  }

  Var word_rows, root;
  switch (config_.encoder) {
    case EncoderKind::kRandomEmbed: {
      Var table = tape.param(params_.get("embed.word"));
      word_rows = ad::rows(table, word_tm);
      root = ad::rows(table, std::vector<int>{word_ids::kRoot});
      break;
    }
    case EncoderKind::kExternalFile:
      word_rows = ad::rows(tape.param(params_.get("embed.external"), true), word_tm);
      root = tape.param(params_.get("embed.root"));
      break;
    case EncoderKind::kBiLm:
      word_rows = nn::bilm_embed(tape, params_, pb, config_.freeze_bilm);
      root = tape.param(params_.get("embed.root"));
      break;
  }

  Var x = word_rows;
  if (config_.fusion != nn::Fusion::kWordOnly) {
    Var head_rows = ad::rows(ad::concat({word_rows, root}, 0), head_tm);
    Var rel_rows = word_rows;
    if (config_.fusion != nn::Fusion::kHeadOnly) {
      rel_rows = ad::rows(tape.param(params_.get("embed.relation")), rel_tm);
    }
    x = nn::fuse(config_.fusion, word_rows, rel_rows, head_rows);
  }
  return nn::bilstm_encode(tape, params_, "enc", config_.lstm_variant, x, B, T, pb.mask).final;
}

Var DseModel::cloze_scores(Tape& tape, std::span<const heads::ClozeQuestion> questions) {
  std::vector<const DepSentence*> sents;
  sents.reserve(questions.size() * heads::kOptions);
  for (const auto& q : questions) {
    for (const auto& s : q.completions) sents.push_back(&s);
  }
  return heads::score(encode(tape, sents), tape.param(params_.get("head.u")));
}

Var DseModel::relation_logits(Tape& tape, std::span<const heads::RelationInstance> instances) {
  std::vector<const DepSentence*> sents;
  sents.reserve(instances.size());
  for (const auto& r : instances) sents.push_back(&r.sentence);
  return heads::relation_logits(encode(tape, sents), tape.param(params_.get("head.W")),
                                tape.param(params_.get("head.b")));
}

namespace {

template <typename T>
std::vector<T> select(const std::vector<T>& items, std::span<const std::size_t> indices) {
  std::vector<T> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(items.at(i));
  return out;
}

void check_task(const DseModel& m, const Dataset& data) {
  if (m.config().task != data.task) {
    throw TaskMismatchError("model is trained for " + std::string(to_string(m.config().task)) +
                            " but data is " + std::string(to_string(data.task)));
  }
}

}  // namespace

Var DseModel::loss(Tape& tape, const Dataset& data, std::span<const std::size_t> indices) {
  check_task(*this, data);
  if (data.task == TaskType::kCloze) {
    const auto qs = select(data.cloze, indices);
    std::vector<int> answers;
    for (const auto& q : qs) answers.push_back(q.answer);
    return heads::completion_loss_batch(cloze_scores(tape, qs), answers, config_.margin);
  }
  const auto rs = select(data.relations, indices);
  std::vector<int> labels;
  for (const auto& r : rs) labels.push_back(static_cast<int>(r.label));
  std::vector<const DepSentence*> sents;
  for (const auto& r : rs) sents.push_back(&r.sentence);
  return heads::relation_loss(encode(tape, sents), labels, tape.param(params_.get("head.W")),
                              tape.param(params_.get("head.b")));
}

std::vector<int> DseModel::predict(const Dataset& data, std::span<const std::size_t> indices) {
  check_task(*this, data);
  std::vector<int> out;
  out.reserve(indices.size());
  Tape tape(/*grad_enabled=*/false);
  if (data.task == TaskType::kCloze) {
    const auto qs = select(data.cloze, indices);
    const Tensor scores = cloze_scores(tape, qs).value();
    for (std::size_t q = 0; q < qs.size(); ++q) {
      out.push_back(static_cast<int>(heads::predict_completion(
          scores.data().subspan(q * heads::kOptions, heads::kOptions))));
    }
  } else {
    const Tensor logits = relation_logits(tape, select(data.relations, indices)).value();
    for (std::size_t r = 0; r < logits.rows(); ++r) {
      out.push_back(static_cast<int>(heads::predict_relation(
          logits.data().subspan(r * heads::kRelationClasses, heads::kRelationClasses))));
    }
  }
  return out;
}

std::vector<double> DseModel::pretrain_bilm(const Dataset& train, std::size_t epochs, double lr) {
  if (config_.encoder != EncoderKind::kBiLm) {
    throw std::logic_error("pretrain_bilm: encoder is not bilm");
  }
  // Distinct word sequences only; cloze options repeat most of a stem.
  std::set<std::vector<int>> unique;
  for (const DepSentence* s : train.sentences()) {
    std::vector<int> ids;
    for (const Token& t : s->tokens) ids.push_back(words_.id(t.form));
    if (ids.size() > config_.max_len) ids.resize(config_.max_len);
    unique.insert(std::move(ids));
  }
  std::vector<std::vector<int>> corpus(unique.begin(), unique.end());
  std::mt19937_64 rng(config_.seed ^ 0x9e3779b97f4a7c15ULL);
  Optimizer opt(OptimizerKind::kSgd, lr, 0.0, 1);
  std::vector<double> history;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    std::shuffle(corpus.begin(), corpus.end(), rng);
    double total = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < corpus.size(); start += config_.batch) {
      const std::size_t end = std::min(corpus.size(), start + config_.batch);
      std::vector<std::vector<int>> chunk(corpus.begin() + static_cast<std::ptrdiff_t>(start),
                                          corpus.begin() + static_cast<std::ptrdiff_t>(end));
      params_.zero_grad();
      Tape tape;
      Var l = nn::bilm_loss(tape, params_, nn::pack_ids(chunk));
      tape.backward(l);
      clip_grad_norm(params_, config_.clip);
      opt.step(params_, "bilm.");
      total += l.value().item();
      ++batches;
    }
    history.push_back(total / static_cast<double>(std::max<std::size_t>(batches, 1)));
  }
  if (config_.freeze_bilm) {
    for (ad::Parameter& p : params_) {
      if (p.name.starts_with("bilm.")) p.trainable = false;
    }
  }
  return history;
}

ad::Checkpoint DseModel::to_checkpoint() const {
  ad::Checkpoint ckpt;
  ckpt.metadata["dse.config"] = to_text(config_);
  ckpt.metadata["dse.words"] = words_.serialize();
  ckpt.metadata["dse.relations"] = relations_.serialize();
  ckpt.params = params_;
  return ckpt;
}

DseModel DseModel::from_checkpoint(const ad::Checkpoint& ckpt) {
  auto field = [&](const std::string& key) -> const std::string& {
    auto it = ckpt.metadata.find(key);
    if (it == ckpt.metadata.end()) throw ad::CheckpointError("checkpoint lacks '" + key + "'");
    return it->second;
  };
  DseModel m;
  m.config_ = parse_config(field("dse.config"));
  m.words_.deserialize(field("dse.words"));
  m.relations_.deserialize(field("dse.relations"));
  m.params_ = ckpt.params;
  return m;
}

}  // namespace dse
