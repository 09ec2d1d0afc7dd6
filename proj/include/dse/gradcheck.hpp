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

#ifndef DSE_GRADCHECK_HPP_
#define DSE_GRADCHECK_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dse/autodiff.hpp"

namespace dse::ad {

// Builds a scalar objective on the given tape from the given parameters.
// Must be deterministic: gradcheck calls it once per perturbed entry.
using Objective = std::function<Var(Tape&, ParameterSet&)>;

struct GradcheckOptions {
  double epsilon = 1e-5;
  double tolerance = 1e-4;
  // 0 checks every entry; otherwise a seeded sample of this many per
  // parameter.
  std::size_t max_entries_per_param = 0;
  std::uint64_t seed = 0;
};

struct GradcheckEntry {
  std::string parameter;
  std::size_t checked = 0;
  std::size_t worst_index = 0;
  double max_relative_error = 0.0;
  double analytic = 0.0;
  double numeric = 0.0;
  bool passed = true;
};

struct GradcheckReport {
  std::vector<GradcheckEntry> entries;
  double tolerance = 0.0;
  bool passed = true;

  // Names of failing parameters, comma separated.
  std::string failing_parameters() const;
};

// |analytic - numeric| / max(|analytic|, |numeric|, 1e-6). Central
// differences at eps=1e-5 resolve gradients to ~1e-11 absolute, so below
// 1e-6 the floor turns the test into an absolute one.
double relative_error(double analytic, double numeric);

// Compares reverse-mode gradients of `objective` against central finite
// differences for every trainable parameter in `params`. Parameter values
// are restored before returning.
GradcheckReport gradcheck(const Objective& objective, ParameterSet& params,
                          const GradcheckOptions& options = {});

struct SuiteResult {
  std::string name;
  std::string shape;  // e.g. "m=3 n=5 k=2"
  GradcheckReport report;
};

// Every differentiable op on `trials` random shapes with dimensions in [1, 8].
// Each op output is reduced by a fixed random weighting so all elements count.
std::vector<SuiteResult> op_suite(const GradcheckOptions& options, std::size_t trials = 6,
                                  std::uint64_t seed = 11);

}  // namespace dse::ad

#endif  // DSE_GRADCHECK_HPP_
