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

#ifndef DSE_EXPANSION_HPP_
#define DSE_EXPANSION_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dse/conllu.hpp"
#include "dse/vocab.hpp"

namespace dse {

// Head slot of the root token.
inline constexpr int kRootHead = -1;
// Head slot of a padded position in a PackedBatch.
inline constexpr int kPadHead = -2;

// (dependent, relation, head) with 0-based token positions.
struct ExpansionTriple {
  int dep_index = 0;
  int rel_id = 0;
  int head_index = kRootHead;

  bool operator==(const ExpansionTriple&) const = default;
  auto operator<=>(const ExpansionTriple&) const = default;
};

struct ExpandedSentence {
  DepSentence sentence;
  // One per token, in surface order: triples[i].dep_index == i.
  std::vector<ExpansionTriple> triples;
};

// Adds every relation label of `sentences` to `relations`.
void intern_relations(const std::vector<DepSentence>& sentences, Vocab& relations);
// Adds every form of `sentences` to `words`.
void intern_words(const std::vector<DepSentence>& sentences, Vocab& words);

// Linearises a validated tree: token i -> (i, rel(deprel_i), head_i - 1),
// the root token -> (i, rel("root"), kRootHead). Labels missing from
// `relations` map to its UNK id.
ExpandedSentence expand(const DepSentence& sentence, const Vocab& relations);

// Rectangular [batch x width] index arrays, row-major. width is the longest
// sentence clipped to max_len.
struct PackedBatch {
  std::size_t batch = 0;
  std::size_t width = 0;
  std::vector<int> word_ids;
  std::vector<int> rel_ids;
  std::vector<int> head_index;
  std::vector<double> mask;
  std::vector<std::size_t> lengths;
  // Sentences cut to max_len. Heads that fell outside the window are
  // re-attached to the ROOT slot.
  std::size_t truncated = 0;

  std::size_t at(std::size_t b, std::size_t t) const { return b * width + t; }
};

PackedBatch batch_pack(std::span<const ExpandedSentence> expanded, std::size_t max_len,
                       const Vocab& words);

// Recovers the triples of every packed sentence (real positions only).
std::vector<std::vector<ExpansionTriple>> unpack(const PackedBatch& batch);

// Human-readable listing: one "dep_form\tdeprel\thead_form" line per token.
std::string format_triples(const ExpandedSentence& expanded, const Vocab& relations);

}  // namespace dse

#endif  // DSE_EXPANSION_HPP_
