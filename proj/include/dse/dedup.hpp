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

#ifndef DSE_DEDUP_HPP_
#define DSE_DEDUP_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

namespace dse {

// Byte-level edit distance (unit insert, delete, substitute).
std::size_t levenshtein(std::string_view a, std::string_view b);

// Same, but stops early: returns min(distance, limit).
std::size_t levenshtein_bounded(std::string_view a, std::string_view b, std::size_t limit);

// Greedy scan in input order. A stem is kept when its distance to every
// stem kept so far is at least `threshold`. Returns kept indices.
std::vector<std::size_t> dedup_indices(const std::vector<std::string_view>& stems,
                                       std::size_t threshold = 8);

}  // namespace dse

#endif  // DSE_DEDUP_HPP_
