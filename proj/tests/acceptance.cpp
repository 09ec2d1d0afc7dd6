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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.
//
// usage: acceptance <dse binary> [artifact dir]

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "dse/ablation.hpp"
#include "dse/checkpoint.hpp"
#include "dse/expansion.hpp"
#include "dse/gradcheck.hpp"
#include "dse/pipeline_gradcheck.hpp"
#include "dse/run.hpp"
#include "dse/synth.hpp"
#include "dse/task_heads.hpp"
#include "dse/training.hpp"
#include "dse/treelstm.hpp"
#include "random_trees.hpp"

namespace fs = std::filesystem;
using namespace dse;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

// ---- 1 ----------------------------------------------------------------------

Outcome gradcheck_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  ad::GradcheckOptions opts;
  opts.tolerance = 1e-4;
  auto results = ad::op_suite(opts, 6, 11);
  const auto pipeline = pipeline_suite(opts, 1);
  results.insert(results.end(), pipeline.begin(), pipeline.end());
  const double secs = seconds_since(t0);
  std::size_t passed = 0;
  std::string failing;
  for (const auto& r : results) {
    if (r.report.passed) {
      ++passed;
    } else {
      failing += " " + r.name;
    }
  }
  Outcome o;
  o.pass = passed == results.size() && pipeline.size() >= 8 && secs < 60.0;
  o.detail = std::to_string(passed) + "/" + std::to_string(results.size()) + " cases (" +
             std::to_string(pipeline.size()) + " whole-model) in " + fmt(secs, 3) + " s" + failing;
  return o;
}

// ---- 2 ----------------------------------------------------------------------

using Edge = std::tuple<int, std::string, int>;

std::set<Edge> dfs_edges(const DepSentence& s) {
  std::vector<std::vector<int>> children(s.size() + 1);
  for (const Token& t : s.tokens) children[static_cast<std::size_t>(t.head)].push_back(t.index);
  std::set<Edge> edges;
  std::function<void(int)> walk = [&](int node) {
    for (int child : children[static_cast<std::size_t>(node)]) {
      const Token& t = s.tokens[static_cast<std::size_t>(child - 1)];
      edges.emplace(child - 1, node == 0 ? "root" : t.deprel, node - 1);
      walk(child);
    }
  };
  walk(0);
  return edges;
}

Outcome expansion_oracle() {
  std::mt19937_64 rng(77);
  Vocab rels = make_relation_vocab();
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t agree = 0, invalid = 0;
  for (int i = 0; i < 1000; ++i) {
    const DepSentence s = testing::random_tree(rng, 12);
    if (!validate_tree(s).ok()) ++invalid;
    intern_relations({s}, rels);
    const ExpandedSentence e = expand(s, rels);
    std::set<Edge> got;
    for (const auto& t : e.triples) got.emplace(t.dep_index, rels.str(t.rel_id), t.head_index);
    if (got == dfs_edges(s) && e.triples.size() == s.size()) ++agree;
  }
  const double secs = seconds_since(t0);
  return {agree == 1000 && invalid == 0 && secs < 5.0,
          std::to_string(agree) + "/1000 trees match in " + fmt(secs, 3) + " s"};
}

// ---- 3 ----------------------------------------------------------------------

Outcome relation_ablation(const fs::path& artifacts) {
  synth::GrammarSpec spec;
  const Dataset train_set = make_relation_dataset(synth::gen_relation(spec, 5000));
  spec.seed = 2;
  const Dataset dev_set = make_relation_dataset(synth::gen_relation(spec, 1000));
  spec.seed = 3;
  const Dataset test_set = make_relation_dataset(synth::gen_relation(spec, 1000));

  ModelConfig c;
  c.task = TaskType::kRelation;
  c.word_dim = c.rel_dim = 16;
  c.hidden = 32;
  c.epochs = 10;
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = run_ablation(c, train_set, dev_set, test_set);
  const double secs = seconds_since(t0);
  write_file(artifacts / "ablation.jsonl", to_jsonl(table));

  const double full = table[0].mean_accuracy();
  const double head = table[1].mean_accuracy();
  const double word = table[2].mean_accuracy();
  return {full >= head && head >= word && full - word >= 0.05 && secs < 600.0,
          "full " + fmt(full) + " >= word+head " + fmt(head) + " >= word-only " + fmt(word) +
              ", gap " + fmt(100.0 * (full - word), 3) + " pp, " + fmt(secs, 3) + " s"};
}

// ---- 4 ----------------------------------------------------------------------

Outcome cloze_fusion() {
  synth::GrammarSpec spec;
  const Dataset train_set = make_cloze_dataset(synth::gen_cloze(spec, 1200));
  spec.seed = 2;
  const Dataset dev_set = make_cloze_dataset(synth::gen_cloze(spec, 300));
  spec.seed = 3;
  const Dataset test_set = make_cloze_dataset(synth::gen_cloze(spec, 960));

  ModelConfig c;
  c.task = TaskType::kCloze;
  c.optimizer = OptimizerKind::kAdam;
  c.lr = 0.01;
  c.word_dim = c.rel_dim = 16;
  c.hidden = 32;
  c.epochs = 8;
  AblationOptions opts;
  opts.fusions = {nn::Fusion::kConcat, nn::Fusion::kGate, nn::Fusion::kWordOnly};
  const auto table = run_ablation(c, train_set, dev_set, test_set, opts);
  const double concat = table[0].mean_accuracy();
  const double gate = table[1].mean_accuracy();
  const double word = table[2].mean_accuracy();
  return {concat > word && gate > word,
          "concat " + fmt(concat) + ", gate " + fmt(gate) + " vs word-only " + fmt(word)};
}

// ---- 5 ----------------------------------------------------------------------

Outcome timing(const fs::path& artifacts) {
  const Dataset data = make_relation_dataset(synth::gen_relation(synth::GrammarSpec{}, 5000));
  tree::BenchOptions opts;
  opts.hidden = 64;
  opts.epochs = 3;
  const auto rows = tree::run_bench(data, opts);
  write_file(artifacts / "bench.jsonl", tree::to_jsonl(rows));
  const double tree_s = rows[0].median_seconds;
  const double seq_s = rows[1].median_seconds;
  return {seq_s < tree_s && rows[0].tokens_per_epoch == rows[1].tokens_per_epoch,
          "expansion " + fmt(seq_s, 3) + " s/epoch vs tree " + fmt(tree_s, 3) +
              " s/epoch, ratio " + fmt(tree_s / seq_s, 3)};
}

// ---- 6 ----------------------------------------------------------------------

Outcome loss_formulas() {
  const std::vector<double> low = {0.1, 0.1, 0.1}, same = {0.5, 0.5, 0.5},
                            mixed = {0.6, 0.4, 0.3};
  const double a = heads::completion_loss(0.9, low, 0.3);
  const double b = heads::completion_loss(0.5, same, 0.3);
  const double c = heads::completion_loss(0.5, mixed, 0.2);

  const std::vector<double> uniform = {0.3, 0.3, 0.3, 0.3, 0.3};
  const std::vector<double> peaked = {2, 1, 0, 0, 0};
  const double u = heads::relation_nll(uniform, 2);
  const double p = heads::relation_nll(peaked, 0);
  const double p_hand = -std::log(std::exp(2.0) / (std::exp(2.0) + std::exp(1.0) + 3.0));

  const double worst = std::max({std::abs(a - 0.0), std::abs(b - 0.9), std::abs(c - 0.4),
                                 std::abs(p - p_hand)});
  const double ln5 = std::abs(u - std::log(5.0));
  return {worst < 1e-10 && ln5 < 1e-12,
          "hinge/NLL max error " + fmt(worst, 3) + ", uniform NLL - ln 5 = " + fmt(ln5, 3)};
}

// ---- 7 ----------------------------------------------------------------------

Outcome chance_levels() {
  // 1200 questions = 25 full periods of the answer-position cycle.
  const Dataset cloze = make_cloze_dataset(synth::gen_cloze(synth::GrammarSpec{}, 1200));
  const Dataset rel = make_relation_dataset(synth::gen_relation(synth::GrammarSpec{}, 1000));
  ModelConfig c;
  c.task = TaskType::kCloze;
  c.word_dim = c.rel_dim = 16;
  c.hidden = 16;
  DseModel cm = DseModel::build(c, cloze);
  const double cloze_acc = evaluate(cm, cloze).accuracy;
  c.task = TaskType::kRelation;
  DseModel rm = DseModel::build(c, rel);
  const double rel_acc = evaluate(rm, rel).accuracy;
  return {std::abs(cloze_acc - 0.25) <= 0.05 && std::abs(rel_acc - 0.20) <= 0.05,
          "cloze " + fmt(100.0 * cloze_acc) + "% on 1200, relation " + fmt(100.0 * rel_acc) +
              "% on 1000"};
}

// ---- 8 ----------------------------------------------------------------------

std::string checkpoint_bytes(const DseModel& m) {
  std::ostringstream out;
  ad::write_checkpoint(out, m.to_checkpoint());
  return out.str();
}

bool same_metrics(const Metrics& a, const Metrics& b) {
  if (a.total != b.total || a.correct != b.correct || a.accuracy != b.accuracy ||
      a.loss != b.loss || a.micro.f1 != b.micro.f1) {
    return false;
  }
  for (std::size_t k = 0; k < heads::kRelationClasses; ++k) {
    if (a.per_class[k].tp != b.per_class[k].tp || a.per_class[k].fp != b.per_class[k].fp ||
        a.per_class[k].fn != b.per_class[k].fn) {
      return false;
    }
  }
  return true;
}

Outcome determinism() {
  bool ok = true;
  std::string detail;
  for (TaskType task : {TaskType::kCloze, TaskType::kRelation}) {
    const Dataset data =
        task == TaskType::kCloze
            ? make_cloze_dataset(synth::gen_cloze(synth::GrammarSpec{}, 120))
            : make_relation_dataset(synth::gen_relation(synth::GrammarSpec{}, 200));
    ModelConfig c;
    c.task = task;
    c.word_dim = c.rel_dim = 8;
    c.hidden = 8;
    c.epochs = 3;
    c.seed = 42;
    const TrainResult r1 = train(c, data, data);
    const TrainResult r2 = train(c, data, data);
    const std::string bytes = checkpoint_bytes(*r1.best);
    const std::string h1 = sha256_hex(bytes);
    const std::string h2 = sha256_hex(checkpoint_bytes(*r2.best));

    DseModel original = *r1.best;
    std::istringstream in(bytes);
    DseModel restored = DseModel::from_checkpoint(ad::read_checkpoint(in));
    const bool round_trip = same_metrics(evaluate(original, data), evaluate(restored, data));
    ok = ok && h1 == h2 && round_trip;
    detail += std::string(to_string(task)) + " sha256 " + h1.substr(0, 12) +
              (h1 == h2 ? " x2" : " != " + h2.substr(0, 12)) +
              (round_trip ? ", round trip exact; " : ", round trip differs; ");
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

// ---- 9 ----------------------------------------------------------------------

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

// Runs `dse dedup` on `input` and checks every retained pair. Returns the
// number of retained stems, or -1 on a violation.
long dedup_cli(const std::string& dse, const fs::path& input, const fs::path& output,
               bool records, std::string& detail) {
  const std::string cmd = quote(dse) + " dedup --threshold 8 --in " + quote(input) + " --out " +
                          quote(output) + " --out-dir " + quote(output.parent_path()) +
                          " > /dev/null";
  if (std::system(cmd.c_str()) != 0) {
    detail = "dse dedup failed";
    return -1;
  }
  std::vector<std::string> stems;
  std::ifstream in(output);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    stems.push_back(records ? nlohmann::json::parse(line).at("stem").get<std::string>() : line);
  }
  for (std::size_t i = 0; i < stems.size(); ++i) {
    for (std::size_t j = i + 1; j < stems.size(); ++j) {
      if (edit_distance(stems[i], stems[j]) < 8) {
        detail = "retained pair at distance < 8: '" + stems[i] + "' / '" + stems[j] + "'";
        return -1;
      }
    }
  }
  return static_cast<long>(stems.size());
}

Outcome dedup_contract(const std::string& dse, const fs::path& work) {
  // Generated cloze records, plus plain lines dense enough that many pairs
  // land within a few edits of each other.
  const std::string gen = quote(dse) + " gen cloze --n 2000 --seed 5 --out-dir " +
                          quote(work / "gen") + " > /dev/null";
  if (std::system(gen.c_str()) != 0) return {false, "dse gen failed"};
  fs::path cloze;
  for (const auto& e : fs::directory_iterator(work / "gen")) cloze = e.path() / "train.jsonl";

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(6, 24), ch('a', 'e');
  {
    std::ofstream out(work / "lines.txt");
    for (int i = 0; i < 2000; ++i) {
      std::string s(static_cast<std::size_t>(len(rng)), 'a');
      for (char& c : s) c = static_cast<char>(ch(rng));
      out << s << '\n';
    }
  }
  std::string detail;
  const long a = dedup_cli(dse, cloze, work / "cloze.dedup.jsonl", true, detail);
  if (a < 0) return {false, detail};
  const long b = dedup_cli(dse, work / "lines.txt", work / "lines.dedup.txt", false, detail);
  if (b < 0) return {false, detail};
  return {a > 0 && b > 0, "2000 cloze stems -> " + std::to_string(a) + " kept, 2000 lines -> " +
                              std::to_string(b) + " kept, all retained pairs >= 8"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <dse binary> [artifact dir]\n";
    return 2;
  }
  const std::string dse = argv[1];
  const fs::path artifacts = argc > 2 ? fs::path(argv[2]) : fs::current_path() / "acceptance-artifacts";
  fs::create_directories(artifacts);
  const fs::path work = fs::temp_directory_path() / ("dse-acceptance-" + utc_timestamp());
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradcheck suite", gradcheck_suite},
      {"expansion oracle", expansion_oracle},
      {"relation ablation ordering", [&] { return relation_ablation(artifacts); }},
      {"cloze fusion beats word-only", cloze_fusion},
      {"expansion faster than tree", [&] { return timing(artifacts); }},
      {"loss formulas", loss_formulas},
      {"chance levels", chance_levels},
      {"determinism and round trip", determinism},
      {"dedup contract", [&] { return dedup_contract(dse, work); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  fs::remove_all(work);
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
