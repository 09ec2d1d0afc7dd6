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

#include "dse/dedup.hpp"

#include <algorithm>
#include <numeric>

namespace dse {

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein_bounded(a, b, std::max(a.size(), b.size()) + 1);
}

std::size_t levenshtein_bounded(std::string_view a, std::string_view b, std::size_t limit) {
  if (a.size() < b.size()) std::swap(a, b);
  if (a.size() - b.size() >= limit) return limit;
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    std::size_t row_min = cur[0];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min >= limit) return limit;
    std::swap(prev, cur);
  }
  return std::min(prev[b.size()], limit);
}

std::vector<std::size_t> dedup_indices(const std::vector<std::string_view>& stems,
                                       std::size_t threshold) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < stems.size(); ++i) {
    const bool distinct = std::all_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return levenshtein_bounded(stems[i], stems[k], threshold) >= threshold;
    });
    if (distinct) kept.push_back(i);
  }
  return kept;
}

}  // namespace dse
