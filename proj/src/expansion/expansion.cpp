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

#include "dse/expansion.hpp"

#include <algorithm>
#include <stdexcept>

namespace dse {

void intern_relations(const std::vector<DepSentence>& sentences, Vocab& relations) {
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      relations.intern(t.head == 0 ? std::string_view("root") : std::string_view(t.deprel));
    }
  }
}

void intern_words(const std::vector<DepSentence>& sentences, Vocab& words) {
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) words.intern(t.form);
  }
}

ExpandedSentence expand(const DepSentence& sentence, const Vocab& relations) {
  ExpandedSentence out;
  out.sentence = sentence;
  out.triples.reserve(sentence.tokens.size());
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const Token& t = sentence.tokens[i];
    ExpansionTriple triple;
    triple.dep_index = static_cast<int>(i);
    if (t.head == 0) {
      triple.rel_id = relations.id("root");
      triple.head_index = kRootHead;
    } else {
      triple.rel_id = relations.id(t.deprel);
      triple.head_index = t.head - 1;
    }
    out.triples.push_back(triple);
  }
  return out;
}

PackedBatch batch_pack(std::span<const ExpandedSentence> expanded, std::size_t max_len,
                       const Vocab& words) {
  if (expanded.empty()) throw std::invalid_argument("empty batch");
  if (max_len == 0) throw std::invalid_argument("batch_pack: max_len must be positive");
  PackedBatch batch;
  batch.batch = expanded.size();
  std::size_t longest = 0;
  for (const auto& e : expanded) longest = std::max(longest, e.triples.size());
  batch.width = std::min(longest, max_len);

  const std::size_t cells = batch.batch * batch.width;
  batch.word_ids.assign(cells, word_ids::kPad);
  batch.rel_ids.assign(cells, rel_ids::kPad);
  batch.head_index.assign(cells, kPadHead);
  batch.mask.assign(cells, 0.0);
  batch.lengths.reserve(batch.batch);

  for (std::size_t b = 0; b < batch.batch; ++b) {
    const ExpandedSentence& e = expanded[b];
    const std::size_t n = std::min(e.triples.size(), batch.width);
    if (n < e.triples.size()) ++batch.truncated;
    batch.lengths.push_back(n);
    for (std::size_t t = 0; t < n; ++t) {
      const ExpansionTriple& tr = e.triples[t];
      const std::size_t cell = batch.at(b, t);
      batch.word_ids[cell] = words.id(e.sentence.tokens[t].form);
      batch.rel_ids[cell] = tr.rel_id;
      const bool head_kept = tr.head_index >= 0 && static_cast<std::size_t>(tr.head_index) < n;
      batch.head_index[cell] = head_kept ? tr.head_index : kRootHead;
      batch.mask[cell] = 1.0;
    }
  }
  return batch;
}

std::vector<std::vector<ExpansionTriple>> unpack(const PackedBatch& batch) {
  std::vector<std::vector<ExpansionTriple>> out(batch.batch);
  for (std::size_t b = 0; b < batch.batch; ++b) {
    for (std::size_t t = 0; t < batch.width; ++t) {
      const std::size_t cell = batch.at(b, t);
      if (batch.mask[cell] == 0.0) continue;
      out[b].push_back({static_cast<int>(t), batch.rel_ids[cell], batch.head_index[cell]});
    }
  }
  return out;
}

std::string format_triples(const ExpandedSentence& expanded, const Vocab& relations) {
  std::string out;
  const auto& tokens = expanded.sentence.tokens;
  for (const auto& tr : expanded.triples) {
    out += tokens[static_cast<std::size_t>(tr.dep_index)].form;
    out += '\t';
    out += relations.str(tr.rel_id);
    out += '\t';
    out += tr.head_index == kRootHead ? std::string("ROOT")
                                      : tokens[static_cast<std::size_t>(tr.head_index)].form;
    out += '\n';
  }
  return out;
}

}  // namespace dse
