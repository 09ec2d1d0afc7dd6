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

#include <functional>
#include <random>
#include <set>
#include <tuple>

#include "doctest.h"
#include "dse/expansion.hpp"
#include "random_trees.hpp"

using namespace dse;

namespace {

using Edge = std::tuple<int, std::string, int>;

// Recursive walk from the root over child lists; head -1 marks the root edge.
std::set<Edge> dfs_edges(const DepSentence& s) {
  const int n = static_cast<int>(s.size());
  std::vector<std::vector<int>> children(n + 1);
  for (const Token& t : s.tokens) children[t.head].push_back(t.index);
  std::set<Edge> edges;
  std::function<void(int)> walk = [&](int node) {
    for (int child : children[node]) {
      const Token& t = s.tokens[child - 1];
      edges.emplace(child - 1, node == 0 ? "root" : t.deprel, node - 1);
      walk(child);
    }
  };
  walk(0);
  return edges;
}

std::set<Edge> expansion_edges(const ExpandedSentence& e, const Vocab& rels) {
  std::set<Edge> edges;
  for (const auto& tr : e.triples) edges.emplace(tr.dep_index, rels.str(tr.rel_id), tr.head_index);
  return edges;
}

DepSentence fruit() {
  return make_sentence({"my", "favorite", "fruit", "is", "apple"}, {3, 3, 4, 0, 4},
                       {"nmod:poss", "amod", "nsubj", "root", "obj"});
}

}  // namespace

TEST_CASE("fruit sentence carries (fruit, nsubj, is)") {
  Vocab rels = make_relation_vocab();
  const DepSentence s = fruit();
  intern_relations({s}, rels);
  const ExpandedSentence e = expand(s, rels);
  REQUIRE(e.triples.size() == 5);
  CHECK(e.triples[2] == ExpansionTriple{2, rels.id("nsubj"), 3});
  CHECK(e.triples[3] == ExpansionTriple{3, rel_ids::kRoot, kRootHead});
  const std::string listing = format_triples(e, rels);
  CHECK(listing.find("fruit\tnsubj\tis\n") != std::string::npos);
  CHECK(listing.find("is\troot\tROOT\n") != std::string::npos);
}

TEST_CASE("single token and three-token chain") {
  Vocab rels = make_relation_vocab();
  const DepSentence one = make_sentence({"go"}, {0}, {"root"});
  const ExpandedSentence e1 = expand(one, rels);
  REQUIRE(e1.triples.size() == 1);
  CHECK(e1.triples[0] == ExpansionTriple{0, rel_ids::kRoot, kRootHead});

  // w1 <- w2 <- w3, w3 is the root.
  const DepSentence chain = make_sentence({"w1", "w2", "w3"}, {2, 3, 0}, {"a", "b", "root"});
  intern_relations({chain}, rels);
  const ExpandedSentence e3 = expand(chain, rels);
  CHECK(e3.triples == std::vector<ExpansionTriple>{{0, rels.id("a"), 1},
                                                    {1, rels.id("b"), 2},
                                                    {2, rel_ids::kRoot, kRootHead}});
}

TEST_CASE("unseen relations map to UNK") {
  Vocab rels = make_relation_vocab();
  intern_relations({fruit()}, rels);
  const DepSentence other = make_sentence({"a", "b"}, {2, 0}, {"never-seen", "root"});
  const ExpandedSentence e = expand(other, rels);
  CHECK(e.triples[0].rel_id == rel_ids::kUnk);
}

TEST_CASE("expansion equals the depth-first edge set on random trees") {
  std::mt19937_64 rng(2024);
  Vocab rels = make_relation_vocab();
  for (int i = 0; i < 1000; ++i) {
    const DepSentence s = testing::random_tree(rng);
    REQUIRE(validate_tree(s).ok());
    intern_relations({s}, rels);
    const ExpandedSentence e = expand(s, rels);
    REQUIRE(e.triples.size() == s.size());
    for (std::size_t k = 0; k < e.triples.size(); ++k) {
      CHECK(e.triples[k].dep_index == static_cast<int>(k));
      CHECK(e.triples[k].rel_id < static_cast<int>(rels.size()));
      if (e.triples[k].head_index != kRootHead) CHECK(e.triples[k].head_index != e.triples[k].dep_index);
    }
    CHECK(expansion_edges(e, rels) == dfs_edges(s));
    // Re-expanding with the same vocabulary is idempotent.
    const std::size_t before = rels.size();
    intern_relations({s}, rels);
    CHECK(rels.size() == before);
    CHECK(expand(s, rels).triples == e.triples);
  }
}

TEST_CASE("batch_pack pads and masks") {
  Vocab rels = make_relation_vocab();
  Vocab words = make_word_vocab();
  const DepSentence a = make_sentence({"x", "y", "z"}, {2, 0, 2}, {"d", "root", "d"});
  const DepSentence b = fruit();
  intern_relations({a, b}, rels);
  intern_words({a, b}, words);
  const std::vector<ExpandedSentence> ex = {expand(a, rels), expand(b, rels)};

  const PackedBatch pb = batch_pack(ex, 5, words);
  CHECK(pb.batch == 2);
  CHECK(pb.width == 5);
  CHECK(pb.mask.size() == 10);
  CHECK(std::vector<double>(pb.mask.begin(), pb.mask.begin() + 5) ==
        std::vector<double>{1, 1, 1, 0, 0});
  CHECK(pb.word_ids[pb.at(0, 3)] == word_ids::kPad);
  CHECK(pb.rel_ids[pb.at(0, 4)] == rel_ids::kPad);
  CHECK(pb.truncated == 0);

  const std::vector<ExpandedSentence> full = {expand(b, rels)};
  const PackedBatch one = batch_pack(full, 5, words);
  for (double m : one.mask) CHECK(m == 1.0);

  CHECK_THROWS_WITH(batch_pack(std::span<const ExpandedSentence>{}, 5, words), "empty batch");
}

TEST_CASE("truncation counts and keeps heads inside the window") {
  Vocab rels = make_relation_vocab();
  Vocab words = make_word_vocab();
  const DepSentence s = fruit();
  intern_relations({s}, rels);
  const std::vector<ExpandedSentence> ex = {expand(s, rels)};
  const PackedBatch pb = batch_pack(ex, 3, words);
  CHECK(pb.width == 3);
  CHECK(pb.truncated == 1);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(pb.mask[t] == 1.0);
    CHECK(pb.head_index[t] < 3);
  }
  // fruit's head ("is") fell outside the window.
  CHECK(pb.head_index[2] == kRootHead);
}

TEST_CASE("unpack reproduces every expanded sentence") {
  std::mt19937_64 rng(99);
  Vocab rels = make_relation_vocab();
  Vocab words = make_word_vocab();
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ExpandedSentence> ex;
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int i = 0; i < n; ++i) {
      const DepSentence s = testing::random_tree(rng);
      intern_relations({s}, rels);
      intern_words({s}, words);
      ex.push_back(expand(s, rels));
    }
    const PackedBatch pb = batch_pack(ex, 12, words);
    const auto back = unpack(pb);
    REQUIRE(back.size() == ex.size());
    for (std::size_t i = 0; i < ex.size(); ++i) CHECK(back[i] == ex[i].triples);
  }
}

TEST_CASE("vocab serialization round trip") {
  Vocab words = make_word_vocab();
  words.intern("alpha");
  words.intern("beta");
  Vocab back = make_word_vocab();
  back.deserialize(words.serialize());
  CHECK(back == words);
  CHECK(back.id("beta") == words.id("beta"));
  CHECK(back.id("gamma") == word_ids::kUnk);
}
