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

#include "dse/task_heads.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace dse::heads {

std::string_view to_string(RelationLabel label) {
  return kRelationLabelNames[static_cast<std::size_t>(label)];
}

RelationLabel parse_relation_label(std::string_view s) {
  for (std::size_t i = 0; i < kRelationLabelNames.size(); ++i) {
    if (kRelationLabelNames[i] == s) return static_cast<RelationLabel>(i);
  }
  throw std::invalid_argument("unknown relation label '" + std::string(s) + "'");
}

Var score(Var rep, Var u) {
  const auto& r = rep.value();
  const auto& w = u.value();
  if (r.rank() != 2 || w.rank() != 2 || w.cols() != 1 || r.cols() != w.rows()) {
    throw ad::ShapeError("score", r.shape(), w.shape());
  }
  return ad::sigmoid(ad::matmul(rep, u));
}

double score(std::span<const double> rep, std::span<const double> u) {
  if (rep.size() != u.size()) {
    throw ad::ShapeError("score", ad::Shape{rep.size()}, ad::Shape{u.size()});
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < rep.size(); ++i) dot += rep[i] * u[i];
  return 1.0 / (1.0 + std::exp(-dot));
}

double completion_loss(double true_score, std::span<const double> false_scores, double margin) {
  double loss = 0.0;
  for (double f : false_scores) loss += std::max(0.0, -true_score + f + margin);
  return loss;
}

Var completion_loss(Var true_rep, std::span<const Var> false_reps, Var u, double margin) {
  if (false_reps.size() != kOptions - 1) {
    throw std::invalid_argument("completion_loss: expected 3 false representations");
  }
  Var f_true = score(true_rep, u);
  Var total;
  for (const Var& rep : false_reps) {
    Var hinge = ad::relu(ad::add_scalar(ad::sub(score(rep, u), f_true), margin));
    total = total.valid() ? ad::add(total, hinge) : hinge;
  }
  return ad::sum(total);
}

Var completion_loss_batch(Var scores, std::span<const int> answers, double margin) {
  const auto& s = scores.value();
  if (s.rank() != 2 || s.cols() != 1 || s.rows() != answers.size() * kOptions) {
    throw ad::ShapeError("completion_loss_batch",
                         ad::shape_string(s.shape()) + " scores for " +
                             std::to_string(answers.size()) + " questions");
  }
  std::vector<int> true_rows, false_rows;
  for (std::size_t q = 0; q < answers.size(); ++q) {
    const int answer = answers[q];
    if (answer < 0 || answer >= static_cast<int>(kOptions)) {
      throw std::out_of_range("completion_loss_batch: answer index " + std::to_string(answer));
    }
    const int base = static_cast<int>(q * kOptions);
    for (int k = 0; k < static_cast<int>(kOptions); ++k) {
      if (k == answer) continue;
      true_rows.push_back(base + answer);
      false_rows.push_back(base + k);
    }
  }
  Var diff = ad::sub(ad::rows(scores, false_rows), ad::rows(scores, true_rows));
  Var hinges = ad::relu(ad::add_scalar(diff, margin));
  return ad::scale(ad::sum(hinges), 1.0 / static_cast<double>(answers.size()));
}

std::size_t predict_completion(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

double relation_nll(std::span<const double> logits, std::size_t label) {
  if (label >= logits.size()) throw std::out_of_range("relation_nll: label out of range");
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double z = 0.0;
  for (double v : logits) z += std::exp(v - mx);
  return -(logits[label] - mx - std::log(z));
}

Var relation_logits(Var rep, Var weight, Var bias) {
  const auto& w = weight.value();
  if (w.rank() != 2 || w.cols() != kRelationClasses) {
    throw ad::ShapeError("relation_logits", "weight must map to 5 logits, got " +
                                                 ad::shape_string(w.shape()));
  }
  return ad::add(ad::matmul(rep, weight), bias);
}

Var relation_loss(Var rep, std::span<const int> labels, Var weight, Var bias) {
  for (int label : labels) {
    if (label < 0 || label >= static_cast<int>(kRelationClasses)) {
      throw std::out_of_range("relation_loss: label " + std::to_string(label) + " out of range");
    }
  }
  return ad::nll_loss(relation_logits(rep, weight, bias), labels);
}

std::size_t predict_relation(std::span<const double> logits) {
  return predict_completion(logits);
}

}  // namespace dse::heads
