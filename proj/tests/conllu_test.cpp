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

#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dse/conllu.hpp"

using namespace dse;

namespace {

// my favorite fruit is apple
const char* kFruit =
    "# sent_id = fruit-1\n"
    "# text = my favorite fruit is apple\n"
    "1\tmy\tmy\tPRON\t_\t_\t3\tnmod:poss\t_\t_\n"
    "2\tfavorite\tfavorite\tADJ\t_\t_\t3\tamod\t_\t_\n"
    "3\tfruit\tfruit\tNOUN\t_\t_\t4\tnsubj\t_\t_\n"
    "4\tis\tbe\tAUX\t_\t_\t0\troot\t_\t_\n"
    "5\tapple\tapple\tNOUN\t_\t_\t4\tobj\t_\t_\n"
    "\n";

}  // namespace

TEST_CASE("five-token fruit sentence") {
  ParseStats stats;
  const auto sents = parse_conllu_string(kFruit, &stats);
  REQUIRE(sents.size() == 1);
  const DepSentence& s = sents[0];
  CHECK(s.size() == 5);
  CHECK(s.sent_id == "fruit-1");
  CHECK(s.comments.size() == 2);
  CHECK(s.text() == "my favorite fruit is apple");
  CHECK(s.tokens[2].head == 4);
  CHECK(s.tokens[2].deprel == "nsubj");
  int roots = 0;
  for (const Token& t : s.tokens) {
    if (t.head == 0) {
      ++roots;
      CHECK(t.form == "is");
    }
  }
  CHECK(roots == 1);
  CHECK(stats.sentences == 1);
  CHECK(stats.tokens == 5);
  CHECK(validate_tree(s).ok());
}

TEST_CASE("single root token") {
  const auto sents = parse_conllu_string("1\tgo\t_\tVERB\t_\t_\t0\troot\t_\t_\n");
  REQUIRE(sents.size() == 1);
  CHECK(sents[0].size() == 1);
  CHECK(sents[0].tokens[0].head == 0);
}

TEST_CASE("self loop is rejected naming the sentence") {
  const char* text =
      "# sent_id = loopy\n"
      "1\ta\t_\t_\t_\t_\t1\tdep\t_\t_\n"
      "2\tb\t_\t_\t_\t_\t0\troot\t_\t_\n\n";
  try {
    parse_conllu_string(text);
    FAIL("expected validation error");
  } catch (const TreeValidationError& e) {
    CHECK(std::string(e.what()).find("loopy") != std::string::npos);
  }
  CHECK(validate_tree(make_sentence({"a", "b"}, {1, 0}, {"dep", "root"})).violation ==
        TreeViolation::kSelfLoop);
}

TEST_CASE("validate_tree reports the first violation") {
  const TreeReport ok = validate_tree(make_sentence({"a", "b", "c", "d", "e"}, {3, 3, 4, 0, 4},
                                                    {"x", "x", "x", "root", "x"}));
  CHECK(ok.ok());

  const TreeReport two = validate_tree(make_sentence({"a", "b"}, {0, 0}, {"root", "root"}));
  CHECK(two.violation == TreeViolation::kMultipleRoots);
  CHECK(two.message.find("multiple roots") != std::string::npos);
  CHECK(two.token == 2);

  // 1 -> 2 -> 1, with 3 as the root.
  const TreeReport cyc =
      validate_tree(make_sentence({"a", "b", "c"}, {2, 1, 0}, {"x", "x", "root"}));
  CHECK(cyc.violation == TreeViolation::kCycle);
  CHECK(cyc.message.find("cycle") != std::string::npos);

  CHECK(validate_tree(make_sentence({"a"}, {2}, {"x"})).violation ==
        TreeViolation::kHeadOutOfRange);
  CHECK(validate_tree(make_sentence({"a", "b"}, {2, 1}, {"x", "x"})).violation ==
        TreeViolation::kNoRoot);
  CHECK(validate_tree(DepSentence{}).violation == TreeViolation::kEmpty);
  CHECK(validate_tree(make_sentence({""}, {0}, {"root"})).violation == TreeViolation::kEmptyForm);
}

TEST_CASE("multiword ranges and empty nodes are skipped and counted") {
  const char* text =
      "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "1\tdo\t_\tAUX\t_\t_\t3\taux\t_\t_\n"
      "2\tn't\t_\tPART\t_\t_\t3\tadvmod\t_\t_\n"
      "3\tgo\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
      "3.1\tgone\t_\tVERB\t_\t_\t_\t_\t3:conj\t_\n\n";
  ParseStats stats;
  const auto sents = parse_conllu_string(text, &stats);
  REQUIRE(sents.size() == 1);
  CHECK(sents[0].size() == 3);
  CHECK(stats.skipped_multiword == 1);
  CHECK(stats.skipped_empty_nodes == 1);
}

TEST_CASE("malformed lines report their line number") {
  const char* text =
      "# sent_id = a\n"
      "1\tone\t_\t_\t_\t_\t0\troot\t_\t_\n"
      "\n"
      "1 two _ _ _ _ 0 root _ _\n";
  try {
    parse_conllu_string(text);
    FAIL("expected parse error");
  } catch (const ConlluParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(parse_conllu_string("1\tx\t_\t_\t_\t_\tzero\troot\t_\t_\n"), ConlluParseError);
  // Nine fields only.
  CHECK_THROWS_AS(parse_conllu_string("1\tx\t_\t_\t_\t_\t0\troot\t_\n"), ConlluParseError);
}

TEST_CASE("several sentences without a trailing blank line") {
  std::string text = kFruit;
  text += "1\tyes\t_\t_\t_\t_\t0\troot\t_\t_";
  const auto sents = parse_conllu_string(text);
  REQUIRE(sents.size() == 2);
  CHECK(sents[1].tokens[0].form == "yes");
}

TEST_CASE("round trip on random trees") {
  std::mt19937_64 rng(17);
  std::vector<DepSentence> sents;
  for (int n = 0; n < 200; ++n) {
    const int len = std::uniform_int_distribution<int>(1, 12)(rng);
    // Random recursive tree over a random permutation keeps roots anywhere.
    std::vector<int> order(len);
    for (int i = 0; i < len; ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> heads(len);
    std::vector<std::string> forms, rels;
    heads[order[0] - 1] = 0;
    for (int k = 1; k < len; ++k) {
      heads[order[k] - 1] = order[std::uniform_int_distribution<int>(0, k - 1)(rng)];
    }
    for (int i = 0; i < len; ++i) {
      forms.push_back("w" + std::to_string(i));
      rels.push_back(heads[i] == 0 ? "root" : "dep");
    }
    DepSentence s = make_sentence(forms, heads, rels);
    s.sent_id = "s" + std::to_string(n);
    s.comments = {"sent_id = s" + std::to_string(n)};
    s.tokens[0].feats = "Number=Sing|Person=3";
    s.tokens[0].misc = "SpaceAfter=No";
    REQUIRE(validate_tree(s).ok());
    sents.push_back(std::move(s));
  }
  const auto back = parse_conllu_string(to_conllu(sents));
  REQUIRE(back.size() == sents.size());
  for (std::size_t i = 0; i < sents.size(); ++i) {
    CHECK(back[i] == sents[i]);
    // n tokens, n head edges counting the root edge.
    std::size_t edges = 0;
    for (const Token& t : back[i].tokens) edges += t.head >= 0 ? 1 : 0;
    CHECK(edges == back[i].size());
  }
}

TEST_CASE("unknown relation labels are accepted") {
  const auto sents = parse_conllu_string("1\tx\t_\t_\t_\t_\t0\tmade:up\t_\t_\n");
  CHECK(sents[0].tokens[0].deprel == "made:up");
}
