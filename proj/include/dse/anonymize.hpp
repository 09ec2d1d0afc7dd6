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

#ifndef DSE_ANONYMIZE_HPP_
#define DSE_ANONYMIZE_HPP_

#include <span>
#include <vector>

#include "dse/conllu.hpp"

namespace dse::heads {

// Half-open, 0-based token range [begin, end).
struct Span {
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

struct AnonymizedSentence {
  DepSentence sentence;
  // 0-based positions of the replacement tokens.
  int e1 = 0;
  int e2 = 0;
  std::vector<int> others;
};

// Replaces e1 with "drug1", e2 with "drug2" and every span in `others` with
// "drug0". A multi-token span collapses to one token that takes over the
// head and relation of the span's highest token; dependents of the span are
// re-attached to it. Throws std::invalid_argument on empty, out-of-range or
// overlapping spans.
AnonymizedSentence anonymize(const DepSentence& sentence, Span e1, Span e2,
                             std::span<const Span> others = {});

}  // namespace dse::heads

#endif  // DSE_ANONYMIZE_HPP_
