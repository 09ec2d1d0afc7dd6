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

#include "dse/optim.hpp"

#include <algorithm>
#include <cmath>

namespace dse {

double clip_grad_norm(ad::ParameterSet& params, double max_norm) {
  const double norm = params.grad_norm();
  if (max_norm > 0.0 && norm > max_norm) {
    const double factor = max_norm / norm;
    for (ad::Parameter& p : params) {
      if (!p.trainable) continue;
      for (double& g : p.grad.data()) g *= factor;
    }
  }
  return norm;
}

Optimizer::Optimizer(OptimizerKind kind, double lr, double warmup, std::size_t total_steps)
    : kind_(kind), lr_(lr), warmup_(warmup), total_(std::max<std::size_t>(total_steps, 1)) {}

double Optimizer::current_lr() const {
  if (kind_ == OptimizerKind::kSgd) return lr_;
  const double progress = static_cast<double>(t_) / static_cast<double>(total_);
  if (warmup_ > 0.0 && progress < warmup_) return lr_ * (progress + 1.0 / total_) / warmup_;
  return lr_ * std::max(0.0, (1.0 - progress) / (1.0 - warmup_));
}

void Optimizer::step(ad::ParameterSet& params, const std::string& prefix) {
  const double lr = current_lr();
  ++t_;
  for (ad::Parameter& p : params) {
    if (!p.trainable || !p.name.starts_with(prefix)) continue;
    auto v = p.value.data();
    auto g = p.grad.data();
    if (kind_ == OptimizerKind::kSgd) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= lr * g[i];
      continue;
    }
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    auto& [m, s] = moments_[p.name];
    if (m.empty()) {
      m.assign(v.size(), 0.0);
      s.assign(v.size(), 0.0);
    }
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < v.size(); ++i) {
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
      s[i] = kBeta2 * s[i] + (1.0 - kBeta2) * g[i] * g[i];
      v[i] -= lr * (m[i] / c1) / (std::sqrt(s[i] / c2) + kEps);
    }
  }
}

}  // namespace dse
