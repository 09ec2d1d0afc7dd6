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

#ifndef DSE_PIPELINE_GRADCHECK_HPP_
#define DSE_PIPELINE_GRADCHECK_HPP_

#include <cstdint>
#include <vector>

#include "dse/gradcheck.hpp"
#include "dse/model.hpp"

namespace dse {

// Tiny hand-built datasets: two cloze questions over 4-token completions and
// three relation sentences of 3 to 5 tokens, so batches carry padding.
Dataset toy_cloze_dataset();
Dataset toy_relation_dataset();

// Whole-model gradient checks: embeddings, expansion gathers, fusion, BiLSTM
// and the task loss, for concat and gate fusion, both LSTM variants and both
// losses, plus the biLM encoder. All parameters are randomised first (the
// zero-initialised heads would otherwise hide encoder gradients).
std::vector<ad::SuiteResult> pipeline_suite(const ad::GradcheckOptions& options,
                                            std::uint64_t seed = 1);

}  // namespace dse

#endif  // DSE_PIPELINE_GRADCHECK_HPP_
