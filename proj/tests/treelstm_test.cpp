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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dse/gradcheck.hpp"
#include "dse/synth.hpp"
#include "dse/treelstm.hpp"
#include "random_trees.hpp"

using namespace dse;
using ad::Tensor;

namespace {

Tensor random_inputs(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor t({n, d});
  for (double& v : t.data()) v = u(rng);
  return t;
}

// Larger weights than the default init so gates leave their linear region.
void randomise(ad::ParameterSet& params, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (auto& p : params) {
    for (double& v : p.value.data()) v = u(rng);
  }
}

DepSentence chain(std::size_t n) {
  // Token k heads token k+1; the last token is the root, so post-order visits
  // 1, 2, ..., n.
  std::vector<std::string> forms;
  std::vector<int> heads;
  std::vector<std::string> rels;
  for (std::size_t k = 1; k <= n; ++k) {
    forms.push_back("w" + std::to_string(k));
    heads.push_back(k == n ? 0 : static_cast<int>(k + 1));
    rels.push_back(k == n ? "root" : "dep");
  }
  return make_sentence(forms, heads, rels);
}

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

TEST_CASE("single-token tree is one LSTM step from a zero state") {
  std::mt19937_64 rng(3);
  ad::ParameterSet params;
  tree::add_treelstm_params(params, "tree", 4, 5, rng);
  randomise(params, rng);
  const DepSentence s = make_sentence({"x"}, {0}, {"root"});
  const Tensor x = random_inputs(1, 4, rng);

  ad::Tape tape(false);
  const Tensor got = tree::treelstm_encode(tape, params, "tree", s, tape.constant(x)).value();
  nn::LstmCell cell(tape, params, "tree", nn::LstmVariant::kStandard);
  const Tensor want = cell.step(cell.zero_state(1), tape.constant(x)).h.value();
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
}

TEST_CASE("chain tree equals a sequential LSTM over the chain order") {
  std::mt19937_64 rng(4);
  for (std::size_t n : {2, 5, 9}) {
    ad::ParameterSet params;
    tree::add_treelstm_params(params, "tree", 3, 4, rng);
    randomise(params, rng);
    const Tensor x = random_inputs(n, 3, rng);
    ad::Tape tape(false);
    const Tensor got = tree::treelstm_encode(tape, params, "tree", chain(n), tape.constant(x)).value();

    nn::LstmCell cell(tape, params, "tree", nn::LstmVariant::kStandard);
    nn::LstmState st = cell.zero_state(1);
    Tensor row({1, 3});
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t c = 0; c < 3; ++c) row[c] = x(t, c);
      st = cell.step(st, tape.constant(row));
    }
    const Tensor want = st.h.value();
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
  }
}

TEST_CASE("balanced 7-node tree at H=1 matches a hand unrolling") {
  //        4
  //      /   \.
  //     2     6
  //    / \   / \.
  //   1   3 5   7
  const DepSentence s =
      make_sentence({"a", "b", "c", "d", "e", "f", "g"}, {2, 4, 2, 0, 6, 4, 6},
                    {"dep", "dep", "dep", "root", "dep", "dep", "dep"});
  REQUIRE(validate_tree(s).ok());
  std::mt19937_64 rng(6);
  ad::ParameterSet params;
  tree::add_treelstm_params(params, "tree", 1, 1, rng);
  randomise(params, rng);
  const Tensor x = random_inputs(7, 1, rng);

  // W is [2 x 4]: row 0 recurrent, row 1 input; columns f, i, u, o.
  const Tensor& W = params.get("tree.W").value;
  const Tensor& b = params.get("tree.b").value;
  auto gate = [&](int g, double xin, double hin) { return xin * W(1, g) + hin * W(0, g) + b[g]; };
  struct Node { double h, c; };
  auto leaf = [&](double xin) {
    const double i = sig(gate(1, xin, 0)), u = std::tanh(gate(2, xin, 0)), o = sig(gate(3, xin, 0));
    const double c = i * u;
    return Node{o * std::tanh(c), c};
  };
  auto inner = [&](double xin, Node l, Node r) {
    const double hsum = l.h + r.h;
    const double fl = sig(gate(0, xin, l.h)), fr = sig(gate(0, xin, r.h));
    const double i = sig(gate(1, xin, hsum)), u = std::tanh(gate(2, xin, hsum));
    const double o = sig(gate(3, xin, hsum));
    const double c = i * u + fl * l.c + fr * r.c;
    return Node{o * std::tanh(c), c};
  };
  const Node n2 = inner(x[1], leaf(x[0]), leaf(x[2]));
  const Node n6 = inner(x[5], leaf(x[4]), leaf(x[6]));
  const Node root = inner(x[3], n2, n6);

  ad::Tape tape(false);
  const Tensor got = tree::treelstm_encode(tape, params, "tree", s, tape.constant(x)).value();
  CHECK(std::abs(got.item() - root.h) < 1e-12);
}

TEST_CASE("tree encoder gradients match finite differences") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 4; ++trial) {
    const DepSentence s = testing::random_tree(rng, 7);
    ad::ParameterSet params;
    tree::add_treelstm_params(params, "tree", 3, 3, rng);
    randomise(params, rng);
    params.add("inputs", random_inputs(s.size(), 3, rng));
    params.add("probe", random_inputs(3, 1, rng));
    const auto report = ad::gradcheck(
        [&](ad::Tape& tape, ad::ParameterSet& p) {
          ad::Var h = tree::treelstm_encode(tape, p, "tree", s, tape.param(p.get("inputs")));
          return ad::matmul(h, tape.param(p.get("probe")));
        },
        params, ad::GradcheckOptions{});
    CHECK_MESSAGE(report.passed, report.failing_parameters());
  }
}

TEST_CASE("bench rows process identical token counts") {
  const Dataset rel = make_relation_dataset(synth::gen_relation(synth::GrammarSpec{}, 40));
  tree::BenchOptions opt;
  opt.hidden = 8;
  opt.word_dim = opt.rel_dim = 8;
  opt.epochs = 3;
  const auto rows = tree::run_bench(rel, opt);
  REQUIRE(rows.size() == 3);
  std::size_t tokens = 0;
  for (const auto& r : rel.relations) tokens += r.sentence.size();
  for (const auto& r : rows) {
    CHECK(r.tokens_per_epoch == tokens);
    CHECK(r.epoch_seconds.size() == 3);
    CHECK(std::isfinite(r.final_loss));
  }
  CHECK(rows[0].name == "tree-lstm");
  CHECK(rows[1].name == "expansion-lstm");
  CHECK(rows[2].name == "expansion+tree");
}

TEST_CASE("one-sentence bench completes for both tasks") {
  const Dataset rel = make_relation_dataset(synth::gen_relation(synth::GrammarSpec{}, 1));
  const Dataset clz = make_cloze_dataset(synth::gen_cloze(synth::GrammarSpec{}, 1));
  tree::BenchOptions opt;
  opt.hidden = 4;
  opt.word_dim = opt.rel_dim = 4;
  for (const Dataset* d : {&rel, &clz}) {
    const auto rows = tree::run_bench(*d, opt);
    CHECK(rows.size() == 3);
    CHECK(rows[0].tokens_per_epoch == rows[2].tokens_per_epoch);
    CHECK(tree::to_jsonl(rows).find("ratio_to_expansion") != std::string::npos);
  }
  CHECK_THROWS_AS(tree::run_bench(Dataset{}, opt), std::invalid_argument);
}
