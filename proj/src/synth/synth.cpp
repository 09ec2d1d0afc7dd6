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

#include "dse/synth.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "dse/anonymize.hpp"
#include "dse/expansion.hpp"

namespace dse::synth {

using heads::ClozeQuestion;
using heads::RelationLabel;
using heads::RelationRecord;
using heads::Span;

namespace {

constexpr const char* kGap = "___";

// Tokens whose heads may point forward; indices are 1-based.
class TreeBuilder {
 public:
  int add(const std::string& form) {
    forms_.push_back(form);
    heads_.push_back(0);
    rels_.push_back("root");
    return static_cast<int>(forms_.size());
  }
  // Multi-word unit: earlier words hang off the last one. Returns the last.
  int add_words(const std::string& text, const std::string& inner_rel) {
    std::istringstream in(text);
    std::vector<int> ids;
    std::string w;
    while (in >> w) ids.push_back(add(w));
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) attach(ids[i], ids.back(), inner_rel);
    return ids.back();
  }
  void attach(int dep, int head, const std::string& rel) {
    heads_[static_cast<std::size_t>(dep - 1)] = head;
    rels_[static_cast<std::size_t>(dep - 1)] = rel;
  }
  int size() const { return static_cast<int>(forms_.size()); }
  DepSentence build() const { return make_sentence(forms_, heads_, rels_); }

 private:
  std::vector<std::string> forms_;
  std::vector<int> heads_;
  std::vector<std::string> rels_;
};

std::size_t pick(std::size_t n, std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[pick(v.size(), rng)];
}

// Canonical options, the correct one, and the completed sentence for a fill
// (or the stem when the fill is the gap marker).
struct Draft {
  std::array<std::string, 4> options;
  int correct = 0;
  std::function<DepSentence(const std::string&)> complete;
};

const std::array<std::string, 4> kCopulas = {"are", "is", "am", "be"};
const std::array<std::string, 4> kTensed = {"is", "are", "was", "were"};
const std::array<std::string, 4> kPairs = {"either,or", "neither,nor", "both,and",
                                           "not only,but also"};
const std::array<std::string, 4> kCues = {"one", "none", "two", "more"};

// i ___ ADJ / the N ___ ADJ / the N will ___ ADJ
Draft agreement(const GrammarSpec& spec, int content, std::mt19937_64& rng) {
  const std::size_t noun = pick(spec.nouns_sg.size(), rng);
  const bool plural = content == 2 || (content == 3 && pick(2, rng) == 1);
  const std::string subject = plural ? spec.nouns_pl[noun] : spec.nouns_sg[noun];
  const std::string adj = pick(spec.adjectives, rng);
  const bool modified = content != 0 && pick(3, rng) == 0;
  const std::string modifier = pick(spec.modifiers, rng);
  const bool very = pick(3, rng) == 0;

  Draft d;
  d.options = kCopulas;
  d.correct = content == 0 ? 2 : content == 1 ? 1 : content == 2 ? 0 : 3;
  d.complete = [=](const std::string& fill) {
    TreeBuilder t;
    int det = 0, mod = 0, aux = 0, subj;
    if (content == 0) {
      subj = t.add("i");
    } else {
      det = t.add("the");
      if (modified) mod = t.add(modifier);
      subj = t.add(subject);
    }
    if (content == 3) aux = t.add("will");
    const int cop = t.add(fill);
    const int adv = very ? t.add("very") : 0;
    const int head = t.add(adj);
    t.attach(subj, head, "nsubj");
    if (det) t.attach(det, subj, "det");
    if (mod) t.attach(mod, subj, "amod");
    if (aux) t.attach(aux, head, "aux");
    t.attach(cop, head, "cop");
    if (adv) t.attach(adv, head, "advmod");
    return t.build();
  };
  return d;
}

// i met the N1 near the N2 that ___ ADJ ADV. The relative clause hangs off
// N1 or N2, which differ in number, so only the tree says which noun the
// verb agrees with. ADV fixes the tense.
Draft attachment(const GrammarSpec& spec, int content, std::mt19937_64& rng) {
  const bool plural_target = content % 2 == 1;
  const bool past = content >= 2;
  const bool high = pick(2, rng) == 0;  // attach to N1
  const std::size_t a = pick(spec.nouns_sg.size(), rng);
  std::size_t b = pick(spec.nouns_sg.size() - 1, rng);
  if (b >= a) ++b;
  const bool n1_plural = high ? plural_target : !plural_target;
  const std::string n1 = n1_plural ? spec.nouns_pl[a] : spec.nouns_sg[a];
  const std::string n2 = n1_plural ? spec.nouns_sg[b] : spec.nouns_pl[b];
  const std::string verb = pick(spec.meet_verbs, rng);
  const std::string adj = pick(spec.adjectives, rng);

  Draft d;
  d.options = kTensed;
  d.correct = (past ? 2 : 0) + (plural_target ? 1 : 0);
  d.complete = [=](const std::string& fill) {
    TreeBuilder t;
    const int i = t.add("i");
    const int v = t.add(verb);
    const int det1 = t.add("the");
    const int head1 = t.add(n1);
    const int near = t.add("near");
    const int det2 = t.add("the");
    const int head2 = t.add(n2);
    const int that = t.add("that");
    const int gap = t.add(fill);
    const int a_ = t.add(adj);
    const int adv = t.add(past ? "yesterday" : "now");
    t.attach(i, v, "nsubj");
    t.attach(det1, head1, "det");
    t.attach(head1, v, "obj");
    t.attach(near, head2, "case");
    t.attach(det2, head2, "det");
    t.attach(head2, head1, "nmod");
    t.attach(that, gap, "nsubj");
    t.attach(gap, high ? head1 : head2, "acl:relcl");
    t.attach(a_, gap, "xcomp");
    t.attach(adv, gap, "advmod");
    return t.build();
  };
  return d;
}

// the N takes ___ X ___ Y and gets CUE; the cue picks the correlative pair.
Draft collocation(const GrammarSpec& spec, int content, std::mt19937_64& rng) {
  const std::size_t noun = pick(spec.nouns_sg.size(), rng);
  const std::size_t x = pick(spec.foods.size(), rng);
  std::size_t y = pick(spec.foods.size() - 1, rng);
  if (y >= x) ++y;
  const std::string subject = spec.nouns_sg[noun];
  const std::string first = spec.foods[x], second = spec.foods[y];
  const std::string cue = kCues[static_cast<std::size_t>(content)];

  Draft d;
  d.options = kPairs;
  d.correct = content;
  d.complete = [=](const std::string& fill) {
    std::string left = fill, right = fill;
    if (const auto comma = fill.find(','); comma != std::string::npos) {
      left = fill.substr(0, comma);
      right = fill.substr(comma + 1);
    }
    TreeBuilder t;
    const int det = t.add("the");
    const int subj = t.add(subject);
    const int verb = t.add("takes");
    const int pre = t.add_words(left, "advmod");
    const int obj = t.add(first);
    const int conj_word = t.add_words(right, "cc");
    const int conj = t.add(second);
    const int and_ = t.add("and");
    const int gets = t.add("gets");
    const int c = t.add(cue);
    t.attach(det, subj, "det");
    t.attach(subj, verb, "nsubj");
    t.attach(pre, obj, "cc:preconj");
    t.attach(obj, verb, "obj");
    t.attach(conj_word, conj, "cc");
    t.attach(conj, obj, "conj");
    t.attach(and_, gets, "cc");
    t.attach(gets, verb, "conj");
    t.attach(c, gets, "obj");
    return t.build();
  };
  return d;
}

}  // namespace

std::vector<ClozeQuestion> gen_cloze(const GrammarSpec& spec, std::size_t n) {
  std::mt19937_64 rng(spec.seed);
  std::vector<ClozeQuestion> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int content = static_cast<int>((i / 3) % 4);
    Draft d;
    switch (i % 3) {
      case 0: d = agreement(spec, content, rng); break;
      case 1: d = attachment(spec, content, rng); break;
      default: d = collocation(spec, content, rng); break;
    }
    // The answer position cycles with period 48 so that positions and
    // answer contents are balanced jointly; distractor order is random.
    std::array<int, 4> perm = {0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::size_t slot = (i / 12) % 4;
    std::swap(perm[slot], *std::find(perm.begin(), perm.end(), d.correct));
    ClozeQuestion q;
    // Two-gap stems mark both gaps.
    q.stem = d.complete(i % 3 == 2 ? std::string(kGap) + "," + kGap : kGap).text();
    for (std::size_t k = 0; k < 4; ++k) {
      const int source = perm[k];
      q.options[k] = d.options[static_cast<std::size_t>(source)];
      q.completions[k] = d.complete(q.options[k]);
      q.completions[k].sent_id = "cloze-" + std::to_string(i) + "-" + std::to_string(k);
      if (source == d.correct) q.answer = static_cast<int>(k);
    }
    out.push_back(std::move(q));
  }
  return out;
}

ClozeType cloze_type_of(const ClozeQuestion& q) {
  if (q.options[0].find(',') != std::string::npos) return ClozeType::kCollocation;
  for (const auto& o : q.options) {
    if (o == "was" || o == "were") return ClozeType::kAttachment;
  }
  return ClozeType::kAgreement;
}

namespace {

// The deprel and head of drug2 for each label, in label order
// advice, effect, mechanism, int, negative.
struct Attachment {
  const char* rel;
  bool to_verb;
};
constexpr std::array<Attachment, 5> kLabelAttachment = {{{"iobj", true},
                                                         {"obl", true},
                                                         {"obj", true},
                                                         {"nmod", false},
                                                         {"appos", false}}};

struct RelationSlots {
  std::string d1, d2, d0;
  std::string verb, prep, adj, noun;  // adj may be empty
  bool third = false;
  std::size_t label = 0;
};

RelationRecord build_relation(const RelationSlots& s) {
  TreeBuilder t;
  RelationRecord r;
  const int d1_begin = t.size();
  const int d1 = t.add_words(s.d1, "compound");
  r.e1 = {d1_begin, t.size()};
  const int verb = t.add(s.verb);
  const int d2_begin = t.size();
  const int d2 = t.add_words(s.d2, "compound");
  r.e2 = {d2_begin, t.size()};
  const int prep = t.add(s.prep);
  const int adj = s.adj.empty() ? 0 : t.add(s.adj);
  const int noun = t.add(s.noun);
  t.attach(d1, verb, "nsubj");
  const Attachment& a = kLabelAttachment[s.label];
  t.attach(d2, a.to_verb ? verb : d1, a.rel);
  t.attach(prep, noun, "case");
  if (adj) t.attach(adj, noun, "amod");
  t.attach(noun, verb, "obl");
  if (s.third) {
    const int cc = t.add("and");
    const int d0_begin = t.size();
    const int d0 = t.add_words(s.d0, "compound");
    r.others.push_back({d0_begin, t.size()});
    t.attach(cc, d0, "cc");
    t.attach(d0, noun, "conj");
  }
  r.sentence = t.build();
  r.label = static_cast<RelationLabel>(s.label);
  return r;
}

}  // namespace

std::vector<RelationRecord> gen_relation(const GrammarSpec& spec, std::size_t n) {
  std::mt19937_64 rng(spec.seed);
  std::vector<RelationRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RelationSlots s;
    std::vector<std::size_t> drugs(spec.drugs.size());
    std::iota(drugs.begin(), drugs.end(), 0);
    std::shuffle(drugs.begin(), drugs.end(), rng);
    s.d1 = spec.drugs[drugs[0]];
    s.d2 = spec.drugs[drugs[1]];
    s.d0 = spec.drugs[drugs[2]];
    s.verb = pick(spec.drug_verbs, rng);
    s.prep = pick(spec.preps, rng);
    const std::size_t adj = pick(spec.clinical_adjs.size() + 1, rng);
    s.adj = adj == 0 ? "" : spec.clinical_adjs[adj - 1];
    s.noun = pick(spec.clinical_nouns, rng);
    s.third = pick(2, rng) == 1;
    s.label = i % heads::kRelationClasses;
    RelationRecord r = build_relation(s);
    r.sentence.sent_id = "rel-" + std::to_string(i);
    out.push_back(std::move(r));
  }
  return out;
}

EnumerationResult relation_bayes_accuracy(const GrammarSpec& spec, View view) {
  // Key -> label counts. Drug names vanish under anonymization, so one
  // placeholder name per role covers them.
  std::map<std::string, std::array<std::size_t, heads::kRelationClasses>> table;
  EnumerationResult result;
  std::vector<std::string> adjs = {""};
  adjs.insert(adjs.end(), spec.clinical_adjs.begin(), spec.clinical_adjs.end());
  for (const auto& verb : spec.drug_verbs) {
    for (const auto& prep : spec.preps) {
      for (const auto& adj : adjs) {
        for (const auto& noun : spec.clinical_nouns) {
          for (bool third : {false, true}) {
            for (std::size_t label = 0; label < heads::kRelationClasses; ++label) {
              RelationSlots s{"x", "y", "z", verb, prep, adj, noun, third, label};
              const RelationRecord r = build_relation(s);
              const heads::AnonymizedSentence a =
                  heads::anonymize(r.sentence, r.e1, r.e2, r.others);
              std::string key;
              for (const Token& t : a.sentence.tokens) {
                key += t.form;
                if (view != View::kWordOnly) {
                  key += '|';
                  key += t.head == 0 ? "ROOT" : a.sentence.tokens[static_cast<std::size_t>(t.head - 1)].form;
                }
                if (view == View::kFull) {
                  key += '|';
                  key += t.head == 0 ? "root" : t.deprel;
                }
                key += ' ';
              }
              ++table[key][label];
              ++result.combinations;
            }
          }
        }
      }
    }
  }
  std::size_t best = 0;
  for (const auto& [key, counts] : table) best += *std::max_element(counts.begin(), counts.end());
  result.distinct_inputs = table.size();
  result.bayes_accuracy = static_cast<double>(best) / static_cast<double>(result.combinations);
  return result;
}

std::vector<std::string> vocabulary(const GrammarSpec& spec) {
  std::set<std::string> words = {"i", "the", "will", "very", "near", "that", "now", "yesterday",
                                 "takes", "and", "gets", "drug0", "drug1", "drug2"};
  for (const auto* list : {&spec.nouns_sg, &spec.nouns_pl, &spec.adjectives, &spec.modifiers,
                           &spec.meet_verbs, &spec.foods, &spec.drug_verbs, &spec.preps,
                           &spec.clinical_adjs, &spec.clinical_nouns}) {
    words.insert(list->begin(), list->end());
  }
  for (const auto& w : kCopulas) words.insert(w);
  for (const auto& w : kTensed) words.insert(w);
  for (const auto& w : kCues) words.insert(w);
  for (const auto& p : kPairs) {
    std::string s = p;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::string w;
    while (in >> w) words.insert(w);
  }
  for (const auto& d : spec.drugs) {
    std::istringstream in(d);
    std::string w;
    while (in >> w) words.insert(w);
  }
  return {words.begin(), words.end()};
}

}  // namespace dse::synth
