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

#ifndef DSE_TASK_HEADS_HPP_
#define DSE_TASK_HEADS_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

#include "dse/autodiff.hpp"

namespace dse::heads {

using ad::Var;

inline constexpr std::size_t kOptions = 4;
inline constexpr std::size_t kRelationClasses = 5;

enum class RelationLabel { kAdvice = 0, kEffect, kMechanism, kInt, kNegative };

inline constexpr std::array<std::string_view, kRelationClasses> kRelationLabelNames = {
    "advice", "effect", "mechanism", "int", "negative"};

std::string_view to_string(RelationLabel label);
RelationLabel parse_relation_label(std::string_view s);

// f(x) = sigmoid(x . u): rep [B x k], u [k x 1] -> [B x 1].
Var score(Var rep, Var u);
double score(std::span<const double> rep, std::span<const double> u);

// sum_i max(0, -f_true + f_false_i + margin) over the three distractors.
double completion_loss(double true_score, std::span<const double> false_scores, double margin);
Var completion_loss(Var true_rep, std::span<const Var> false_reps, Var u, double margin);

// Mean over questions of the hinge sum. `scores` is [4Q x 1] with option k of
// question q at row 4q + k; answers[q] names the correct option.
Var completion_loss_batch(Var scores, std::span<const int> answers, double margin);

// Highest score, ties to the lowest index.
std::size_t predict_completion(std::span<const double> scores);

// -log softmax(logits)[label] for a single logit row.
double relation_nll(std::span<const double> logits, std::size_t label);

// Mean NLL of `labels` under rep * W + b (5 logits per row).
Var relation_loss(Var rep, std::span<const int> labels, Var weight, Var bias);
Var relation_logits(Var rep, Var weight, Var bias);

std::size_t predict_relation(std::span<const double> logits);

}  // namespace dse::heads

#endif  // DSE_TASK_HEADS_HPP_
