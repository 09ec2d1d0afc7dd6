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

#include "dse/pipeline_gradcheck.hpp"

#include <numeric>
#include <random>

namespace dse {

Dataset toy_cloze_dataset() {
  using heads::ClozeQuestion;
  auto q = [](std::string stem, std::array<std::string, heads::kOptions> opts, int answer,
              std::vector<std::string> words, std::size_t gap, std::vector<int> heads,
              std::vector<std::string> rels) {
    ClozeQuestion c;
    c.stem = std::move(stem);
    c.options = opts;
    c.answer = answer;
    for (std::size_t k = 0; k < heads::kOptions; ++k) {
      words[gap] = opts[k];
      c.completions[k] = make_sentence(words, heads, rels);
    }
    return c;
  };
  std::vector<ClozeQuestion> qs;
  qs.push_back(q("the boys ___ tall", {"are", "is", "am", "be"}, 0, {"the", "boys", "", "tall"}, 2,
                 {2, 4, 4, 0}, {"det", "nsubj", "cop", "root"}));
  qs.push_back(q("a dog ___ tea", {"likes", "like", "liking", "liked"}, 0,
                 {"a", "dog", "", "tea"}, 2, {2, 3, 0, 3}, {"det", "nsubj", "root", "obj"}));
  return make_cloze_dataset(std::move(qs));
}

Dataset toy_relation_dataset() {
  Dataset d;
  d.task = TaskType::kRelation;
  using heads::RelationLabel;
  d.relations.push_back({make_sentence({"drug1", "increases", "drug2"}, {2, 0, 2},
                                       {"nsubj", "root", "obj"}),
                         0, 2, RelationLabel::kMechanism});
  d.relations.push_back({make_sentence({"drug1", "alters", "serum", "drug2", "levels"},
                                       {2, 0, 5, 5, 2}, {"nsubj", "root", "amod", "nmod", "obj"}),
                         0, 3, RelationLabel::kEffect});
  d.relations.push_back({make_sentence({"avoid", "drug1", "with", "drug2"}, {0, 1, 4, 2},
                                       {"root", "obj", "case", "nmod"}),
                         1, 3, RelationLabel::kInt});
  return d;
}

std::vector<ad::SuiteResult> pipeline_suite(const ad::GradcheckOptions& options,
                                            std::uint64_t seed) {
  struct Case {
    TaskType task;
    EncoderKind encoder;
    nn::Fusion fusion;
    nn::LstmVariant variant;
  };
  std::vector<Case> cases;
  for (TaskType task : {TaskType::kCloze, TaskType::kRelation}) {
    for (nn::Fusion f : {nn::Fusion::kConcat, nn::Fusion::kGate}) {
      for (nn::LstmVariant v : {nn::LstmVariant::kAsWritten, nn::LstmVariant::kStandard}) {
        cases.push_back({task, EncoderKind::kRandomEmbed, f, v});
      }
    }
    cases.push_back({task, EncoderKind::kBiLm, nn::Fusion::kConcat, nn::LstmVariant::kAsWritten});
  }

  const Dataset cloze = toy_cloze_dataset();
  const Dataset relation = toy_relation_dataset();
  std::vector<ad::SuiteResult> out;
  std::mt19937_64 rng(seed);
  for (const Case& c : cases) {
    const Dataset& data = c.task == TaskType::kCloze ? cloze : relation;
    ModelConfig cfg;
    cfg.task = c.task;
    cfg.encoder = c.encoder;
    cfg.fusion = c.fusion;
    cfg.lstm_variant = c.variant;
    cfg.lm_hidden = 2;
    cfg.word_dim = c.encoder == EncoderKind::kBiLm ? 4 : 3;
    cfg.rel_dim = c.fusion == nn::Fusion::kGate ? cfg.word_dim : 2;
    cfg.hidden = 3;
    cfg.seed = seed;
    DseModel model = DseModel::build(cfg, data);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (ad::Parameter& p : model.params()) {
      for (double& v : p.value.data()) v = u(rng);
    }
    std::vector<std::size_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), 0);
    ad::Objective f = [&](ad::Tape& tape, ad::ParameterSet&) { return model.loss(tape, data, idx); };

    std::string name = std::string(to_string(c.task)) + " " + std::string(to_string(c.encoder)) +
                       " " + std::string(nn::to_string(c.fusion)) + " " +
                       std::string(nn::to_string(c.variant));
    out.push_back({std::move(name), "d=" + std::to_string(cfg.word_dim) + " d_r=" +
                                        std::to_string(cfg.rel_dim) + " H=3",
                   ad::gradcheck(f, model.params(), options)});
  }
  return out;
}

}  // namespace dse
