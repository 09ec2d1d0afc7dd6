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

#ifndef DSE_SYNTH_HPP_
#define DSE_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dse/task_io.hpp"

namespace dse::synth {

// Vocabulary lists behind both toy grammars. Singular and plural noun lists
// are aligned by position.
struct GrammarSpec {
  std::uint64_t seed = 1;

  std::vector<std::string> nouns_sg = {"boy", "girl", "dog", "cat", "man", "woman",
                                       "bird", "child", "tree", "house"};
  std::vector<std::string> nouns_pl = {"boys", "girls", "dogs", "cats", "men", "women",
                                       "birds", "children", "trees", "houses"};
  std::vector<std::string> adjectives = {"tall", "small", "happy", "old", "quiet", "red", "big",
                                         "young"};
  std::vector<std::string> modifiers = {"little", "new", "other"};
  std::vector<std::string> meet_verbs = {"met", "saw", "liked"};
  std::vector<std::string> foods = {"tea", "milk", "bread", "rice", "juice", "soup", "cake",
                                    "fruit"};

  std::vector<std::string> drugs = {"aspirin", "warfarin", "heparin", "insulin", "lithium",
                                    "digoxin", "valproic acid", "vitamin k", "st john wort",
                                    "ketoconazole", "ritonavir", "phenytoin"};
  std::vector<std::string> drug_verbs = {"increases", "reduces", "alters", "affects", "enhances",
                                         "inhibits"};
  std::vector<std::string> preps = {"in", "with", "during", "after"};
  std::vector<std::string> clinical_adjs = {"serum", "plasma", "hepatic", "renal"};
  std::vector<std::string> clinical_nouns = {"levels", "patients", "clearance", "therapy",
                                             "metabolism", "effects"};
};

enum class ClozeType { kAgreement, kAttachment, kCollocation };

// Question i uses type i % 3. Answers are balanced over option content and
// over positions; every completion carries a hand-built tree.
std::vector<heads::ClozeQuestion> gen_cloze(const GrammarSpec& spec, std::size_t n);
ClozeType cloze_type_of(const heads::ClozeQuestion& q);

// Raw sentences with real drug names; labels follow from the relation that
// attaches the second drug. Labels cycle through the five classes.
std::vector<heads::RelationRecord> gen_relation(const GrammarSpec& spec, std::size_t n);

enum class View { kWordOnly, kWordHead, kFull };

struct EnumerationResult {
  std::size_t combinations = 0;
  std::size_t distinct_inputs = 0;
  double bayes_accuracy = 0.0;
};

// Exhaustive walk over the relation template space after anonymization:
// best achievable accuracy for a classifier seeing only the given view.
EnumerationResult relation_bayes_accuracy(const GrammarSpec& spec, View view);

// Every word form either grammar can emit.
std::vector<std::string> vocabulary(const GrammarSpec& spec);

}  // namespace dse::synth

#endif  // DSE_SYNTH_HPP_
