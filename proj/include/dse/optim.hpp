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

#ifndef DSE_OPTIM_HPP_
#define DSE_OPTIM_HPP_

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "dse/autodiff.hpp"
#include "dse/config.hpp"

namespace dse {

// Scales trainable gradients so their global norm is at most max_norm
// (0 disables). Returns the norm before clipping.
double clip_grad_norm(ad::ParameterSet& params, double max_norm);

// SGD, or Adam with a linear warmup over the first `warmup` fraction of
// steps followed by linear decay to zero.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double lr, double warmup, std::size_t total_steps);

  // Updates trainable parameters whose name starts with `prefix`.
  void step(ad::ParameterSet& params, const std::string& prefix = "");
  double current_lr() const;
  std::size_t steps_taken() const { return t_; }

 private:
  OptimizerKind kind_;
  double lr_;
  double warmup_;
  std::size_t total_;
  std::size_t t_ = 0;
  std::unordered_map<std::string, std::pair<std::vector<double>, std::vector<double>>> moments_;
};

}  // namespace dse

#endif  // DSE_OPTIM_HPP_
