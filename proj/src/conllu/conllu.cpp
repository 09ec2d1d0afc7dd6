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

#include "dse/conllu.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dse {

namespace {

constexpr std::size_t kColumns = 10;

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string describe(const DepSentence& s, std::size_t ordinal) {
  if (s.sent_id) return "sentence '" + *s.sent_id + "'";
  return "sentence #" + std::to_string(ordinal);
}

}  // namespace

std::string DepSentence::text() const {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.form;
  }
  return out;
}

ConlluParseError::ConlluParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

TreeReport validate_tree(const DepSentence& sentence) {
  const auto& tokens = sentence.tokens;
  const int n = static_cast<int>(tokens.size());
  if (n == 0) return {TreeViolation::kEmpty, 0, "empty sentence"};

  int root = 0;
  for (int i = 0; i < n; ++i) {
    const Token& t = tokens[static_cast<std::size_t>(i)];
    if (t.index != i + 1) {
      return {TreeViolation::kBadIndex, i + 1,
              "token " + std::to_string(i + 1) + " has index " + std::to_string(t.index)};
    }
    if (t.form.empty()) {
      return {TreeViolation::kEmptyForm, t.index, "empty form at token " + std::to_string(t.index)};
    }
    if (t.head < 0 || t.head > n) {
      return {TreeViolation::kHeadOutOfRange, t.index,
              "head " + std::to_string(t.head) + " out of range at token " + std::to_string(t.index)};
    }
    if (t.head == t.index) {
      return {TreeViolation::kSelfLoop, t.index, "self-loop at token " + std::to_string(t.index)};
    }
    if (t.head == 0) {
      if (root != 0) {
        return {TreeViolation::kMultipleRoots, t.index,
                "multiple roots: tokens " + std::to_string(root) + " and " + std::to_string(t.index)};
      }
      root = t.index;
    }
  }
  if (root == 0) return {TreeViolation::kNoRoot, 0, "no root"};

  // Every walk up the head chain must reach the root within n steps.
  for (int i = 0; i < n; ++i) {
    int cur = i + 1;
    for (int steps = 0; cur != 0; ++steps) {
      if (steps > n) {
        return {TreeViolation::kCycle, i + 1, "cycle through token " + std::to_string(i + 1)};
      }
      cur = tokens[static_cast<std::size_t>(cur - 1)].head;
    }
  }
  return {};
}

std::vector<DepSentence> parse_conllu(std::istream& in, ParseStats* stats) {
  ParseStats local;
  ParseStats& st = stats ? *stats : local;
  std::vector<DepSentence> out;
  DepSentence current;
  bool open = false;
  std::size_t line_no = 0;
  std::size_t first_line = 0;

  auto finish = [&]() {
    if (!open) return;
    if (current.tokens.empty()) {
      throw ConlluParseError(first_line, "sentence has comments but no tokens");
    }
    const TreeReport report = validate_tree(current);
    if (!report.ok()) {
      throw TreeValidationError(describe(current, out.size() + 1) + " (line " +
                                std::to_string(first_line) + "): " + report.message);
    }
    st.tokens += current.tokens.size();
    ++st.sentences;
    out.push_back(std::move(current));
    current = DepSentence{};
    open = false;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      finish();
      continue;
    }
    if (!open) {
      open = true;
      first_line = line_no;
    }
    if (line.front() == '#') {
      std::string comment = line.substr(1);
      const std::string_view body(comment);
      const std::size_t eq = body.find('=');
      if (eq != std::string_view::npos) {
        std::string_view key = body.substr(0, eq);
        while (!key.empty() && key.front() == ' ') key.remove_prefix(1);
        while (!key.empty() && key.back() == ' ') key.remove_suffix(1);
        if (key == "sent_id") {
          std::string_view value = body.substr(eq + 1);
          while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
          current.sent_id = std::string(value);
        }
      }
      current.comments.push_back(std::move(comment));
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != kColumns) {
      throw ConlluParseError(line_no, "expected 10 tab-separated fields, found " +
                                          std::to_string(fields.size()));
    }
    const std::string_view id = fields[0];
    if (id.find('-') != std::string_view::npos) {
      ++st.skipped_multiword;
      continue;
    }
    if (id.find('.') != std::string_view::npos) {
      ++st.skipped_empty_nodes;
      continue;
    }
    Token token;
    if (!parse_int(id, token.index)) {
      throw ConlluParseError(line_no, "bad token id '" + std::string(id) + "'");
    }
    if (token.index != static_cast<int>(current.tokens.size()) + 1) {
      throw ConlluParseError(line_no, "token id " + std::to_string(token.index) +
                                          " out of sequence");
    }
    for (std::size_t c = 1; c < kColumns; ++c) {
      if (fields[c].empty()) {
        throw ConlluParseError(line_no, "empty field in column " + std::to_string(c + 1));
      }
    }
    token.form = fields[1];
    token.lemma = fields[2];
    token.upos = fields[3];
    token.xpos = fields[4];
    token.feats = fields[5];
    if (!parse_int(fields[6], token.head) || token.head < 0) {
      throw ConlluParseError(line_no, "bad head '" + std::string(fields[6]) + "'");
    }
    token.deprel = fields[7];
    token.deps = fields[8];
    token.misc = fields[9];
    current.tokens.push_back(std::move(token));
  }
  finish();
  return out;
}

std::vector<DepSentence> parse_conllu_string(std::string_view text, ParseStats* stats) {
  std::istringstream in{std::string(text)};
  return parse_conllu(in, stats);
}

std::vector<DepSentence> read_conllu_file(const std::string& path, ParseStats* stats) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_conllu(in, stats);
}

void write_conllu(std::ostream& out, const DepSentence& sentence) {
  bool has_id_comment = false;
  for (const auto& c : sentence.comments) {
    if (c.find("sent_id") != std::string::npos) has_id_comment = true;
  }
  if (sentence.sent_id && !has_id_comment) out << "# sent_id = " << *sentence.sent_id << '\n';
  for (const auto& c : sentence.comments) out << '#' << c << '\n';
  for (const Token& t : sentence.tokens) {
    out << t.index << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << '\t'
        << t.xpos << '\t' << t.feats << '\t' << t.head << '\t' << t.deprel << '\t'
        << t.deps << '\t' << t.misc << '\n';
  }
  out << '\n';
}

std::string to_conllu(const DepSentence& sentence) {
  std::ostringstream out;
  write_conllu(out, sentence);
  return out.str();
}

std::string to_conllu(const std::vector<DepSentence>& sentences) {
  std::ostringstream out;
  for (const auto& s : sentences) write_conllu(out, s);
  return out.str();
}

DepSentence make_sentence(const std::vector<std::string>& forms,
                          const std::vector<int>& heads,
                          const std::vector<std::string>& deprels) {
  if (forms.size() != heads.size() || forms.size() != deprels.size()) {
    throw std::invalid_argument("make_sentence: column lengths differ");
  }
  DepSentence s;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    Token t;
    t.index = static_cast<int>(i) + 1;
    t.form = forms[i];
    t.head = heads[i];
    t.deprel = deprels[i];
    s.tokens.push_back(std::move(t));
  }
  return s;
}

}  // namespace dse
