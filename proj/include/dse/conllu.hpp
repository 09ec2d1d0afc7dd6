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

#ifndef DSE_CONLLU_HPP_
#define DSE_CONLLU_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dse {

// One syntactic word. `index` is 1-based; `head` is 0 for the root.
struct Token {
  int index = 0;
  std::string form;
  std::string lemma = "_";
  std::string upos = "_";
  std::string xpos = "_";
  std::string feats = "_";
  int head = 0;
  std::string deprel;
  std::string deps = "_";
  std::string misc = "_";

  bool operator==(const Token&) const = default;
};

struct DepSentence {
  std::vector<Token> tokens;
  std::optional<std::string> sent_id;
  // Comment lines (without the leading '#') in file order.
  std::vector<std::string> comments;

  std::size_t size() const { return tokens.size(); }
  std::string text() const;
  bool operator==(const DepSentence&) const = default;
};

// Malformed input; `line` is 1-based within the stream.
class ConlluParseError : public std::runtime_error {
 public:
  ConlluParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Structurally invalid sentence (cycle, several roots, ...).
class TreeValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TreeViolation {
  kNone,
  kEmpty,
  kBadIndex,
  kEmptyForm,
  kSelfLoop,
  kHeadOutOfRange,
  kNoRoot,
  kMultipleRoots,
  kCycle,
};

struct TreeReport {
  TreeViolation violation = TreeViolation::kNone;
  // 1-based index of the offending token, 0 when not token specific.
  int token = 0;
  std::string message;

  bool ok() const { return violation == TreeViolation::kNone; }
};

TreeReport validate_tree(const DepSentence& sentence);

struct ParseStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t skipped_multiword = 0;
  std::size_t skipped_empty_nodes = 0;
};

// Reads CoNLL-U: 10 tab-separated columns per token line, blank lines
// between sentences, '#' comments. Multiword ranges ("3-4") and empty
// nodes ("5.1") are skipped and counted. Every returned sentence passes
// validate_tree.
std::vector<DepSentence> parse_conllu(std::istream& in, ParseStats* stats = nullptr);
std::vector<DepSentence> parse_conllu_string(std::string_view text,
                                             ParseStats* stats = nullptr);
std::vector<DepSentence> read_conllu_file(const std::string& path,
                                          ParseStats* stats = nullptr);

void write_conllu(std::ostream& out, const DepSentence& sentence);
std::string to_conllu(const DepSentence& sentence);
std::string to_conllu(const std::vector<DepSentence>& sentences);

// Convenience for building fixtures: forms, 1-based heads and relations.
DepSentence make_sentence(const std::vector<std::string>& forms,
                          const std::vector<int>& heads,
                          const std::vector<std::string>& deprels);

}  // namespace dse

#endif  // DSE_CONLLU_HPP_
