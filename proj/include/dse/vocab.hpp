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

#ifndef DSE_VOCAB_HPP_
#define DSE_VOCAB_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dse {

// String interning table. The first entries are reserved specials; lookups
// of unknown strings return the UNK id.
class Vocab {
 public:
  Vocab(std::vector<std::string> specials, int unk_id);

  // Adds `s` if absent and returns its id.
  int intern(std::string_view s);
  // Id of `s`, or unk_id() when absent.
  int id(std::string_view s) const;
  bool contains(std::string_view s) const;
  const std::string& str(int id) const;

  std::size_t size() const { return strings_.size(); }
  int unk_id() const { return unk_; }
  std::size_t special_count() const { return specials_; }

  // One entry per line, specials included.
  std::string serialize() const;
  void deserialize(std::string_view text);

  bool operator==(const Vocab& other) const { return strings_ == other.strings_; }

 private:
  std::vector<std::string> strings_;
  std::unordered_map<std::string, int> ids_;
  std::size_t specials_;
  int unk_;
};

namespace word_ids {
inline constexpr int kPad = 0;
inline constexpr int kUnk = 1;
inline constexpr int kRoot = 2;
inline constexpr int kBos = 3;
inline constexpr int kEos = 4;
}  // namespace word_ids

namespace rel_ids {
inline constexpr int kPad = 0;
inline constexpr int kUnk = 1;
inline constexpr int kRoot = 2;
}  // namespace rel_ids

// <pad> <unk> <root> <bos> <eos>, then data-driven forms.
Vocab make_word_vocab();
// <pad> <unk> root, then data-driven relation labels.
Vocab make_relation_vocab();

}  // namespace dse

#endif  // DSE_VOCAB_HPP_
