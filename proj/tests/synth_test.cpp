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
#include <array>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "dse/dedup.hpp"
#include "dse/synth.hpp"

using namespace dse;

namespace {

// Plain O(nm) table, no early exit.
std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

std::vector<std::string_view> views(const std::vector<std::string>& s) {
  return {s.begin(), s.end()};
}

std::string random_string(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> ch('a', 'd');
  std::string s(len(rng), 'a');
  for (char& c : s) c = static_cast<char>(ch(rng));
  return s;
}

}  // namespace

TEST_CASE("every generated tree is valid") {
  const synth::GrammarSpec spec;
  for (const auto& q : synth::gen_cloze(spec, 600)) {
    for (const auto& s : q.completions) CHECK(validate_tree(s).ok());
  }
  for (const auto& r : synth::gen_relation(spec, 600)) CHECK(validate_tree(r.sentence).ok());
}

TEST_CASE("generation is seed-deterministic") {
  synth::GrammarSpec spec;
  const auto a = synth::gen_cloze(spec, 200);
  const auto b = synth::gen_cloze(spec, 200);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].stem == b[i].stem);
    CHECK(a[i].options == b[i].options);
    CHECK(a[i].answer == b[i].answer);
    CHECK(a[i].completions == b[i].completions);
  }
  const auto r1 = synth::gen_relation(spec, 200);
  const auto r2 = synth::gen_relation(spec, 200);
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].sentence == r2[i].sentence);
    CHECK(r1[i].label == r2[i].label);
  }
  spec.seed = 2;
  const auto c = synth::gen_relation(spec, 200);
  bool differs = false;
  for (std::size_t i = 0; i < c.size(); ++i) differs = differs || !(c[i].sentence == r1[i].sentence);
  CHECK(differs);
}

TEST_CASE("cloze questions have one answer among four agreement-style options") {
  const auto qs = synth::gen_cloze(synth::GrammarSpec{}, 4800);  // 100 position periods
  bool found_example = false;
  std::array<std::size_t, 4> positions{};
  for (const auto& q : qs) {
    REQUIRE(q.answer >= 0);
    REQUIRE(q.answer < 4);
    ++positions[static_cast<std::size_t>(q.answer)];
    std::set<std::string> distinct(q.options.begin(), q.options.end());
    CHECK(distinct.size() == 4);
    if (q.stem == "the boys ___ tall") {
      found_example = true;
      CHECK(distinct == std::set<std::string>{"are", "is", "am", "be"});
      CHECK(q.options[static_cast<std::size_t>(q.answer)] == "are");
      CHECK(q.completions[static_cast<std::size_t>(q.answer)].text() == "the boys are tall");
    }
  }
  CHECK(found_example);
  for (std::size_t p : positions) CHECK(p == 1200);
}

TEST_CASE("two-gap questions pair their options") {
  const auto qs = synth::gen_cloze(synth::GrammarSpec{}, 60);
  std::size_t seen = 0;
  for (const auto& q : qs) {
    if (synth::cloze_type_of(q) != synth::ClozeType::kCollocation) continue;
    ++seen;
    CHECK(q.stem.find("___") != q.stem.rfind("___"));
    for (const auto& o : q.options) CHECK(o.find(',') != std::string::npos);
    // "either,or" fills both gaps.
    for (std::size_t k = 0; k < 4; ++k) {
      if (q.options[k] != "either,or") continue;
      const std::string text = q.completions[k].text();
      CHECK(text.find(" either ") != std::string::npos);
      CHECK(text.find(" or ") != std::string::npos);
    }
  }
  CHECK(seen == 20);
}

TEST_CASE("relation classes are balanced within 2% at n=5000") {
  std::array<std::size_t, heads::kRelationClasses> counts{};
  for (const auto& r : synth::gen_relation(synth::GrammarSpec{}, 5000)) {
    ++counts[static_cast<std::size_t>(r.label)];
  }
  for (std::size_t c : counts) CHECK(std::abs(static_cast<double>(c) / 5000.0 - 0.2) <= 0.02);
}

TEST_CASE("vocabulary stays under 200 words and covers generated text") {
  const synth::GrammarSpec spec;
  const auto vocab = synth::vocabulary(spec);
  CHECK(vocab.size() <= 200);
  const std::set<std::string> known(vocab.begin(), vocab.end());
  for (const auto& q : synth::gen_cloze(spec, 300)) {
    for (const auto& s : q.completions) {
      for (const auto& t : s.tokens) CHECK(known.count(t.form) == 1);
    }
  }
  for (const auto& r : synth::gen_relation(spec, 300)) {
    for (const auto& t : r.sentence.tokens) CHECK(known.count(t.form) == 1);
  }
}

TEST_CASE("enumeration oracle over the relation templates") {
  // 6 verbs x 4 preps x 5 adjective slots x 6 nouns x 2 (third drug) = 1440
  // surfaces, each emitted once per label. The label only moves drug2's arc:
  // words alone see 5 labels per surface; heads split them 3 (verb) + 2
  // (drug1); relations separate all five.
  const synth::GrammarSpec spec;
  const auto word = synth::relation_bayes_accuracy(spec, synth::View::kWordOnly);
  const auto head = synth::relation_bayes_accuracy(spec, synth::View::kWordHead);
  const auto full = synth::relation_bayes_accuracy(spec, synth::View::kFull);
  CHECK(word.combinations == 7200);
  CHECK(head.combinations == 7200);
  CHECK(full.combinations == 7200);
  CHECK(word.distinct_inputs == 1440);
  CHECK(head.distinct_inputs == 2880);
  CHECK(full.distinct_inputs == 7200);
  CHECK(word.bayes_accuracy == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(head.bayes_accuracy == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(full.bayes_accuracy == 1.0);
  CHECK(word.bayes_accuracy < 1.0);
}

TEST_CASE("levenshtein matches a full dynamic-programming table") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const std::string a = random_string(rng, 14), b = random_string(rng, 14);
    const std::size_t d = edit_distance(a, b);
    CHECK(levenshtein(a, b) == d);
    for (std::size_t limit : {0, 1, 3, 8, 30}) {
      CHECK(levenshtein_bounded(a, b, limit) == std::min(d, limit));
    }
  }
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "abc") == 3);
}

TEST_CASE("dedup threshold edges") {
  CHECK(dedup_indices(views({"the boys ___ tall", "the boys ___ tall"})).size() == 1);

  const std::string base = "abcdefghijklmnopqrst";
  auto changed = [&](std::size_t k) {
    std::string s = base;
    for (std::size_t i = 0; i < k; ++i) s[i] = 'z';
    return s;
  };
  REQUIRE(edit_distance(base, changed(10)) == 10);
  REQUIRE(edit_distance(base, changed(8)) == 8);
  REQUIRE(edit_distance(base, changed(7)) == 7);
  CHECK(dedup_indices(views({base, changed(10)})).size() == 2);
  CHECK(dedup_indices(views({base, changed(8)})).size() == 2);  // strictly below 8 is a duplicate
  CHECK(dedup_indices(views({base, changed(7)})) == std::vector<std::size_t>{0});
  CHECK(dedup_indices({}).empty());
}

TEST_CASE("dedup keeps every retained pair at distance >= threshold") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::string> stems;
    for (int i = 0; i < 60; ++i) stems.push_back(random_string(rng, 12));
    const auto keep = dedup_indices(views(stems), 5);
    CHECK(keep.size() <= stems.size());
    CHECK(std::is_sorted(keep.begin(), keep.end()));
    CHECK(keep == dedup_indices(views(stems), 5));
    for (std::size_t i = 0; i < keep.size(); ++i) {
      for (std::size_t j = i + 1; j < keep.size(); ++j) {
        CHECK(edit_distance(stems[keep[i]], stems[keep[j]]) >= 5);
      }
    }
    // Each dropped stem is within the threshold of something kept before it.
    for (std::size_t i = 0; i < stems.size(); ++i) {
      if (std::binary_search(keep.begin(), keep.end(), i)) continue;
      bool covered = false;
      for (std::size_t k : keep) covered = covered || (k < i && edit_distance(stems[k], stems[i]) < 5);
      CHECK(covered);
    }
  }
}

TEST_CASE("dedup of 1000 generated cloze stems is a fixed count") {
  const auto qs = synth::gen_cloze(synth::GrammarSpec{}, 1000);
  std::vector<std::string_view> stems;
  for (const auto& q : qs) stems.push_back(q.stem);
  const auto keep = dedup_indices(stems, 8);
  // Regression value; the templates are short, so most stems collapse.
  CHECK(keep.size() == 218);
  CHECK(keep.front() == 0);
}
