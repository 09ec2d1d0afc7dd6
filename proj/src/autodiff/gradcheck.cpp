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

#include "dse/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace dse::ad {

double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / denom;
}

std::string GradcheckReport::failing_parameters() const {
  std::string out;
  for (const auto& e : entries) {
    if (e.passed) continue;
    if (!out.empty()) out += ", ";
    out += e.parameter;
  }
  return out;
}

namespace {

double evaluate(const Objective& objective, ParameterSet& params) {
  Tape tape(/*grad_enabled=*/false);
  return objective(tape, params).value().item();
}

}  // namespace

GradcheckReport gradcheck(const Objective& objective, ParameterSet& params,
                          const GradcheckOptions& options) {
  params.zero_grad();
  {
    Tape tape;
    Var root = objective(tape, params);
    tape.backward(root);
  }

  GradcheckReport report;
  report.tolerance = options.tolerance;
  std::mt19937_64 rng(options.seed);

  for (Parameter& p : params) {
    if (!p.trainable) continue;
    GradcheckEntry entry;
    entry.parameter = p.name;

    std::vector<std::size_t> indices(p.value.size());
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    if (options.max_entries_per_param > 0 &&
        indices.size() > options.max_entries_per_param) {
      std::shuffle(indices.begin(), indices.end(), rng);
      indices.resize(options.max_entries_per_param);
      std::sort(indices.begin(), indices.end());
    }

    for (std::size_t i : indices) {
      const double saved = p.value[i];
      p.value[i] = saved + options.epsilon;
      const double plus = evaluate(objective, params);
      p.value[i] = saved - options.epsilon;
      const double minus = evaluate(objective, params);
      p.value[i] = saved;

      const double numeric = (plus - minus) / (2.0 * options.epsilon);
      const double analytic = p.grad[i];
      const double err = relative_error(analytic, numeric);
      ++entry.checked;
      if (entry.checked == 1 || err > entry.max_relative_error) {
        entry.max_relative_error = err;
        entry.worst_index = i;
        entry.analytic = analytic;
        entry.numeric = numeric;
      }
    }
    entry.passed = entry.max_relative_error < options.tolerance;
    report.passed = report.passed && entry.passed;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace dse::ad
