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

#include <random>
#include <utility>

#include "dse/gradcheck.hpp"

namespace dse::ad {

namespace {

Tensor random_tensor(Shape shape, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

Var readout(Var y, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Var w = y.tape().constant(random_tensor(y.shape(), rng));
  return sum(mul(y, w));
}

}  // namespace

std::vector<SuiteResult> op_suite(const GradcheckOptions& options, std::size_t trials,
                                  std::uint64_t seed) {
  std::mt19937_64 shapes(seed);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  std::vector<SuiteResult> out;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t m = dim(shapes), n = dim(shapes), k = dim(shapes);
    std::mt19937_64 rng(seed * 1000 + trial);
    ParameterSet ps;
    ps.add("a", random_tensor({m, n}, rng));
    ps.add("b", random_tensor({n, k}, rng));
    ps.add("c", random_tensor({m, n}, rng));
    ps.add("bias", random_tensor({1, n}, rng));
    ps.add("pos", random_tensor({m, n}, rng, 0.2, 2.0));
    ps.add("table", random_tensor({5, n}, rng));
    // relu inputs stay at least 0.1 away from the kink
    Tensor r = random_tensor({m, n}, rng, 0.1, 1.0);
    std::bernoulli_distribution flip(0.5);
    for (double& v : r.data()) v = flip(rng) ? v : -v;
    ps.add("r", std::move(r));

    std::vector<int> ids, labels;
    std::vector<double> mask, weights;
    std::uniform_int_distribution<int> pick(0, 4);
    std::uniform_int_distribution<int> lab(0, static_cast<int>(n) - 1);
    for (std::size_t i = 0; i < m; ++i) {
      ids.push_back(pick(rng));
      labels.push_back(lab(rng));
      mask.push_back(i % 2 == 0 ? 1.0 : 0.0);
      weights.push_back(i == 0 ? 1.0 : 0.5 * static_cast<double>(i % 3));
    }

    auto P = [](Tape& t, ParameterSet& p, const char* name) { return t.param(p.get(name)); };
    using Fn = std::function<Var(Tape&, ParameterSet&)>;
    const std::vector<std::pair<const char*, Fn>> cases = {
        {"matmul", [&](Tape& t, ParameterSet& p) { return matmul(P(t, p, "a"), P(t, p, "b")); }},
        {"add", [&](Tape& t, ParameterSet& p) { return add(P(t, p, "a"), P(t, p, "c")); }},
        {"bias-add", [&](Tape& t, ParameterSet& p) { return add(P(t, p, "a"), P(t, p, "bias")); }},
        {"sub", [&](Tape& t, ParameterSet& p) { return sub(P(t, p, "a"), P(t, p, "c")); }},
        {"mul", [&](Tape& t, ParameterSet& p) { return mul(P(t, p, "a"), P(t, p, "c")); }},
        {"scale", [&](Tape& t, ParameterSet& p) { return scale(P(t, p, "a"), -1.7); }},
        {"concat0", [&](Tape& t, ParameterSet& p) { return concat({P(t, p, "a"), P(t, p, "c")}, 0); }},
        {"concat1", [&](Tape& t, ParameterSet& p) { return concat({P(t, p, "a"), P(t, p, "c")}, 1); }},
        {"sigmoid", [&](Tape& t, ParameterSet& p) { return sigmoid(P(t, p, "a")); }},
        {"tanh", [&](Tape& t, ParameterSet& p) { return tanh(P(t, p, "a")); }},
        {"relu", [&](Tape& t, ParameterSet& p) { return relu(P(t, p, "r")); }},
        {"log", [&](Tape& t, ParameterSet& p) { return log(P(t, p, "pos")); }},
        {"softmax1", [&](Tape& t, ParameterSet& p) { return softmax(P(t, p, "a"), 1); }},
        {"softmax0", [&](Tape& t, ParameterSet& p) { return softmax(P(t, p, "a"), 0); }},
        {"log_softmax1", [&](Tape& t, ParameterSet& p) { return log_softmax(P(t, p, "a"), 1); }},
        {"log_softmax0", [&](Tape& t, ParameterSet& p) { return log_softmax(P(t, p, "a"), 0); }},
        {"mean", [&](Tape& t, ParameterSet& p) { return mean(P(t, p, "a")); }},
        {"rows", [&](Tape& t, ParameterSet& p) { return rows(P(t, p, "table"), ids); }},
        {"slice0", [&](Tape& t, ParameterSet& p) { return slice(P(t, p, "a"), 0, m / 2, m); }},
        {"slice1", [&](Tape& t, ParameterSet& p) { return slice(P(t, p, "a"), 1, 0, (n + 1) / 2); }},
        {"blend", [&](Tape& t, ParameterSet& p) { return blend(mask, P(t, p, "a"), P(t, p, "c")); }},
        {"nll", [&](Tape& t, ParameterSet& p) { return nll_loss(P(t, p, "a"), labels, weights); }},
    };
    const std::string shape = "m=" + std::to_string(m) + " n=" + std::to_string(n) +
                              " k=" + std::to_string(k);
    for (const auto& [name, fn] : cases) {
      const std::uint64_t probe = seed * 7919 + trial;
      Objective f = [&fn, probe](Tape& t, ParameterSet& p) { return readout(fn(t, p), probe); };
      out.push_back({name, shape, gradcheck(f, ps, options)});
    }
  }
  return out;
}

}  // namespace dse::ad
