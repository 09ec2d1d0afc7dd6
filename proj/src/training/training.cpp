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

#include "dse/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "dse/optim.hpp"

namespace dse {

ClassScores score_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassScores s;
  s.tp = tp;
  s.fp = fp;
  s.fn = fn;
  s.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  s.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  s.f1 = s.precision + s.recall == 0.0 ? 0.0
                                       : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

Metrics cloze_metrics(std::span<const int> gold, std::span<const int> predicted) {
  if (gold.size() != predicted.size()) throw std::invalid_argument("metrics: size mismatch");
  Metrics m;
  m.task = TaskType::kCloze;
  m.total = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) m.correct += gold[i] == predicted[i] ? 1 : 0;
  m.accuracy = m.total == 0 ? 0.0 : static_cast<double>(m.correct) / static_cast<double>(m.total);
  return m;
}

Metrics relation_metrics(std::span<const int> gold, std::span<const int> predicted) {
  Metrics m = cloze_metrics(gold, predicted);
  m.task = TaskType::kRelation;
  constexpr int kNegative = static_cast<int>(heads::RelationLabel::kNegative);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (int c = 0; c < static_cast<int>(heads::kRelationClasses); ++c) {
    std::size_t ctp = 0, cfp = 0, cfn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (predicted[i] == c && gold[i] == c) ++ctp;
      if (predicted[i] == c && gold[i] != c) ++cfp;
      if (predicted[i] != c && gold[i] == c) ++cfn;
    }
    m.per_class[static_cast<std::size_t>(c)] = score_counts(ctp, cfp, cfn);
    if (c == kNegative) continue;
    tp += ctp;
    fp += cfp;
    fn += cfn;
  }
  m.micro = score_counts(tp, fp, fn);
  return m;
}

Metrics evaluate(DseModel& model, const Dataset& data, std::size_t batch) {
  if (model.config().task != data.task) {
    throw TaskMismatchError("checkpoint is for " + std::string(to_string(model.config().task)) +
                            " but data is " + std::string(to_string(data.task)));
  }
  std::vector<int> gold, predicted;
  double loss_sum = 0.0;
  for (std::size_t start = 0; start < data.size(); start += batch) {
    std::vector<std::size_t> idx(std::min(batch, data.size() - start));
    std::iota(idx.begin(), idx.end(), start);
    const std::vector<int> p = model.predict(data, idx);
    predicted.insert(predicted.end(), p.begin(), p.end());
    ad::Tape tape(false);
    loss_sum += model.loss(tape, data, idx).value().item() * static_cast<double>(idx.size());
  }
  if (data.task == TaskType::kCloze) {
    for (const auto& q : data.cloze) gold.push_back(q.answer);
  } else {
    for (const auto& r : data.relations) gold.push_back(static_cast<int>(r.label));
  }
  Metrics m = data.task == TaskType::kCloze ? cloze_metrics(gold, predicted)
                                            : relation_metrics(gold, predicted);
  m.loss = data.empty() ? 0.0 : loss_sum / static_cast<double>(data.size());
  return m;
}

TrainingDivergedError::TrainingDivergedError(std::size_t epoch, std::size_t batch,
                                             const std::string& details)
    : std::runtime_error("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                         std::to_string(batch) + ": " + details),
      epoch_(epoch),
      batch_(batch) {}

namespace {

std::string norm_report(const ad::ParameterSet& params) {
  std::ostringstream out;
  out.precision(6);
  bool first = true;
  for (const ad::Parameter& p : params) {
    out << (first ? "" : ", ") << p.name << " |w|=" << p.value.norm() << " |g|=" << p.grad.norm();
    first = false;
  }
  return out.str();
}

}  // namespace

TrainResult train(const ModelConfig& config, const Dataset& train_set, const Dataset& dev_set,
                  const EpochCallback& on_epoch) {
  if (train_set.empty()) throw std::invalid_argument("train: empty training set");
  if (dev_set.empty()) throw std::invalid_argument("train: empty dev set");
  if (dev_set.task != config.task) throw TaskMismatchError("train: dev set task differs from config");

  TrainResult result;
  DseModel model = DseModel::build(config, train_set);
  if (config.encoder == EncoderKind::kBiLm && config.bilm_epochs > 0) {
    result.bilm_history = model.pretrain_bilm(train_set, config.bilm_epochs, config.bilm_lr);
  }

  const std::size_t n = train_set.size();
  const std::size_t per_epoch = (n + config.batch - 1) / config.batch;
  Optimizer opt(config.optimizer, config.lr, config.warmup, per_epoch * config.epochs);
  std::mt19937_64 rng(config.seed + 0x5bd1e995ULL);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  double best = -1.0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0, norm_sum = 0.0;
    std::size_t b = 0;
    for (std::size_t start = 0; start < n; start += config.batch, ++b) {
      const std::span<const std::size_t> idx(order.data() + start,
                                             std::min(config.batch, n - start));
      model.params().zero_grad();
      double value = 0.0;
      try {
        ad::Tape tape;
        ad::Var l = model.loss(tape, train_set, idx);
        value = l.value().item();
        tape.backward(l);
      } catch (const ad::NonFiniteError& e) {
        throw TrainingDivergedError(epoch, b, std::string(e.what()) + "; parameter norms: " + norm_report(model.params()));
      }
      const double gnorm = clip_grad_norm(model.params(), config.clip);
      if (!std::isfinite(value) || !std::isfinite(gnorm)) {
        throw TrainingDivergedError(epoch, b, "loss " + std::to_string(value) + "; parameter norms: " +
                                                  norm_report(model.params()));
      }
      opt.step(model.params());
      loss_sum += value * static_cast<double>(idx.size());
      norm_sum += gnorm;
    }
    const Metrics dev = evaluate(model, dev_set);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(n);
    rec.dev_metric = dev.headline();
    rec.dev_loss = dev.loss;
    rec.grad_norm = norm_sum / static_cast<double>(std::max<std::size_t>(b, 1));
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (rec.dev_metric > best) {
      best = rec.dev_metric;
      result.best_epoch = epoch;
      result.best_dev = dev;
      result.best = model;
    }
  }
  if (!result.best) {  // zero epochs
    result.best = model;
    result.best_dev = evaluate(model, dev_set);
  }
  return result;
}

std::string to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["task"] = std::string(to_string(m.task));
  j["total"] = m.total;
  j["correct"] = m.correct;
  j["accuracy"] = m.accuracy;
  j["loss"] = m.loss;
  if (m.task == TaskType::kRelation) {
    nlohmann::ordered_json classes;
    for (std::size_t c = 0; c < heads::kRelationClasses; ++c) {
      const ClassScores& s = m.per_class[c];
      classes[std::string(heads::kRelationLabelNames[c])] = {
          {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
          {"tp", s.tp}, {"fp", s.fp}, {"fn", s.fn}};
    }
    j["per_class"] = classes;
    j["micro_precision"] = m.micro.precision;
    j["micro_recall"] = m.micro.recall;
    j["micro_f1"] = m.micro.f1;
  }
  return j.dump();
}

std::string to_json(const EpochRecord& r) {
  nlohmann::ordered_json j;
  j["epoch"] = r.epoch;
  j["train_loss"] = r.train_loss;
  j["dev_metric"] = r.dev_metric;
  j["dev_loss"] = r.dev_loss;
  j["grad_norm"] = r.grad_norm;
  j["seconds"] = r.seconds;
  return j.dump();
}

}  // namespace dse
