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

#include "dse/vocab.hpp"

#include <stdexcept>

namespace dse {

Vocab::Vocab(std::vector<std::string> specials, int unk_id)
    : specials_(specials.size()), unk_(unk_id) {
  for (auto& s : specials) intern(s);
  if (unk_ < 0 || static_cast<std::size_t>(unk_) >= strings_.size()) {
    throw std::invalid_argument("vocab: unk id outside specials");
  }
}

int Vocab::intern(std::string_view s) {
  auto it = ids_.find(std::string(s));
  if (it != ids_.end()) return it->second;
  const int id = static_cast<int>(strings_.size());
  strings_.emplace_back(s);
  ids_.emplace(strings_.back(), id);
  return id;
}

int Vocab::id(std::string_view s) const {
  auto it = ids_.find(std::string(s));
  return it == ids_.end() ? unk_ : it->second;
}

bool Vocab::contains(std::string_view s) const { return ids_.contains(std::string(s)); }

const std::string& Vocab::str(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= strings_.size()) {
    throw std::out_of_range("vocab: id " + std::to_string(id) + " out of range");
  }
  return strings_[static_cast<std::size_t>(id)];
}

std::string Vocab::serialize() const {
  std::string out;
  for (const auto& s : strings_) {
    out += s;
    out += '\n';
  }
  return out;
}

void Vocab::deserialize(std::string_view text) {
  std::vector<std::string> entries;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    entries.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (entries.size() < specials_) throw std::invalid_argument("vocab: missing specials");
  for (std::size_t i = 0; i < specials_; ++i) {
    if (entries[i] != strings_[i]) throw std::invalid_argument("vocab: special mismatch");
  }
  strings_.resize(specials_);
  ids_.clear();
  for (std::size_t i = 0; i < specials_; ++i) ids_.emplace(strings_[i], static_cast<int>(i));
  for (std::size_t i = specials_; i < entries.size(); ++i) intern(entries[i]);
}

Vocab make_word_vocab() {
  return Vocab({"<pad>", "<unk>", "<root>", "<bos>", "<eos>"}, word_ids::kUnk);
}

Vocab make_relation_vocab() { return Vocab({"<pad>", "<unk>", "root"}, rel_ids::kUnk); }

}  // namespace dse
