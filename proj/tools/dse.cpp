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

// dse: command-line front end. Every subcommand takes --seed (falling back to
// $DSE_SEED). Commands that produce artifacts write them, plus manifest.json,
// into <out-dir>/<timestamp>-seed<seed>/. Failures end with exactly one line
// on stderr of the form "dse: error[<category>]: <message>".

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dse/ablation.hpp"
#include "dse/checkpoint.hpp"
#include "dse/conllu.hpp"
#include "dse/dedup.hpp"
#include "dse/expansion.hpp"
#include "dse/pipeline_gradcheck.hpp"
#include "dse/run.hpp"
#include "dse/synth.hpp"
#include "dse/task_io.hpp"
#include "dse/training.hpp"
#include "dse/treelstm.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace dse;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kConfig = 3, kInput = 4, kDiverged = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A check that ran to completion and found problems (gradcheck).
struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int fail(const std::string& category, std::string message, int code) {
  for (char& c : message) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::cerr << "dse: error[" << category << "]: " << message << '\n';
  return code;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("DSE_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || *env == '-') {
      throw UsageError(std::string("DSE_SEED is not an unsigned integer: '") + env + "'");
    }
    return v;
  }
  return fallback;
}

json tagged(const std::string& kind, const std::string& body) {
  json j;
  j["kind"] = kind;
  const json parsed = json::parse(body);
  for (const auto& [k, v] : parsed.items()) j[k] = v;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

Dataset load_split(const std::string& path, TaskType expected, const std::string& role) {
  Dataset d = load_dataset(path);
  if (d.task != expected) {
    throw TaskMismatchError(role + " file '" + path + "' holds " + std::string(to_string(d.task)) +
                            " records but the config task is " + std::string(to_string(expected)));
  }
  if (d.empty()) throw std::invalid_argument(role + " file '" + path + "' has no records");
  return d;
}

ModelConfig resolved_config(const std::string& path, const std::vector<std::string>& sets,
                            const std::optional<std::uint64_t>& seed) {
  ModelConfig cfg = load_config(path);
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("set", "expected key=value, got '" + kv + "'");
    set_config_field(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.seed = resolve_seed(seed, cfg.seed);
  cfg.validate();
  return cfg;
}

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out_dir = "runs";
};

void add_seed(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "RNG seed (default: $DSE_SEED, then the config or 1)");
}

void add_out_dir(CLI::App* sub, Common& c) {
  sub->add_option("--out-dir", c.out_dir, "Parent directory for the run directory")
      ->capture_default_str();
}

// ---- parse / expand --------------------------------------------------------

int cmd_parse(const std::string& file, bool validate_only) {
  ParseStats stats;
  const std::vector<DepSentence> sentences = read_conllu_file(file, &stats);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const TreeReport r = validate_tree(sentences[i]);
    if (!r.ok()) {
      const std::string id = sentences[i].sent_id ? " (" + *sentences[i].sent_id + ")" : "";
      throw TreeValidationError("sentence " + std::to_string(i + 1) + id + ": " + r.message);
    }
  }
  if (!validate_only) {
    std::cout << to_conllu(sentences);
    return kOk;
  }
  json j;
  j["file"] = file;
  j["sentences"] = stats.sentences;
  j["tokens"] = stats.tokens;
  j["skipped_multiword"] = stats.skipped_multiword;
  j["skipped_empty_nodes"] = stats.skipped_empty_nodes;
  j["valid"] = true;
  std::cout << j.dump() << '\n';
  return kOk;
}

int cmd_expand(const std::string& file) {
  const std::vector<DepSentence> sentences = read_conllu_file(file);
  Vocab relations = make_relation_vocab();
  intern_relations(sentences, relations);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) std::cout << '\n';
    if (sentences[i].sent_id) std::cout << "# sent_id = " << *sentences[i].sent_id << '\n';
    std::cout << format_triples(expand(sentences[i], relations), relations);
  }
  return kOk;
}

// ---- train / eval ----------------------------------------------------------

struct TrainArgs {
  Common common;
  std::string config;
  std::vector<std::string> sets;
  bool out_dir_given = false;
};

int cmd_train(const TrainArgs& a, const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.started = utc_timestamp();
  manifest.command = "train";
  manifest.argv = argv;
  const ModelConfig cfg = resolved_config(a.config, a.sets, a.common.seed);
  if (cfg.train_path.empty()) throw ConfigError("train", "no training file given");
  if (cfg.dev_path.empty()) throw ConfigError("dev", "no dev file given");
  const Dataset train_set = load_split(cfg.train_path, cfg.task, "train");
  const Dataset dev_set = load_split(cfg.dev_path, cfg.task, "dev");
  std::optional<Dataset> test_set;
  if (!cfg.test_path.empty()) test_set = load_split(cfg.test_path, cfg.task, "test");

  const fs::path dir = make_run_dir(a.out_dir_given ? a.common.out_dir : cfg.out_dir, cfg.seed);
  manifest.seed = cfg.seed;
  manifest.config = to_text(cfg);
  for (const std::string& p : {cfg.train_path, cfg.dev_path, cfg.test_path, cfg.embeddings_path}) {
    if (!p.empty()) manifest.datasets[p] = sha256_file(p);
  }
  write_text(dir / "config.cfg", manifest.config);

  std::ofstream metrics(dir / "metrics.jsonl");
  TrainResult result = train(cfg, train_set, dev_set, [&](const EpochRecord& r) {
    metrics << tagged("epoch", to_json(r)).dump() << '\n' << std::flush;
    std::cerr << "epoch " << r.epoch << " train_loss " << r.train_loss << " dev " << r.dev_metric
              << '\n';
  });
  for (std::size_t e = 0; e < result.bilm_history.size(); ++e) {
    json j;
    j["kind"] = "bilm";
    j["epoch"] = e + 1;
    j["loss"] = result.bilm_history[e];
    metrics << j.dump() << '\n';
  }
  json dev = tagged("dev", to_json(result.best_dev));
  dev["best_epoch"] = result.best_epoch;
  metrics << dev.dump() << '\n';

  json summary;
  summary["run_dir"] = dir.string();
  summary["best_epoch"] = result.best_epoch;
  summary["dev"] = result.best_dev.headline();
  if (test_set) {
    const Metrics t = evaluate(*result.best, *test_set);
    metrics << tagged("test", to_json(t)).dump() << '\n';
    summary["test"] = t.headline();
  }
  metrics.close();
  ad::save_checkpoint(dir / "model.ckpt", result.best->to_checkpoint());
  write_manifest(dir, manifest);
  std::cout << summary.dump() << '\n';
  return kOk;
}

int cmd_eval(const Common& c, const std::string& ckpt, const std::string& data,
             const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.started = utc_timestamp();
  manifest.command = "eval";
  manifest.argv = argv;
  DseModel model = DseModel::from_checkpoint(ad::load_checkpoint(ckpt));
  const Dataset d = load_split(data, model.config().task, "data");
  const Metrics m = evaluate(model, d);
  manifest.seed = resolve_seed(c.seed, model.config().seed);
  manifest.config = to_text(model.config());
  manifest.datasets[ckpt] = sha256_file(ckpt);
  manifest.datasets[data] = sha256_file(data);
  const fs::path dir = make_run_dir(c.out_dir, manifest.seed);
  write_text(dir / "metrics.json", to_json(m) + "\n");
  write_manifest(dir, manifest);
  std::cout << to_json(m) << '\n';
  return kOk;
}

// ---- ablate ----------------------------------------------------------------

struct AblateArgs {
  TrainArgs base;
  std::vector<double> margins;
  std::vector<std::string> fusions;
  std::size_t seeds = 3;
};

int cmd_ablate(const AblateArgs& a, const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.started = utc_timestamp();
  manifest.command = "ablate";
  manifest.argv = argv;
  const ModelConfig cfg = resolved_config(a.base.config, a.base.sets, a.base.common.seed);
  for (const auto& [field, path] : {std::pair<std::string, std::string>{"train", cfg.train_path},
                                    {"dev", cfg.dev_path},
                                    {"test", cfg.test_path}}) {
    if (path.empty()) throw ConfigError(field, "ablation needs train, dev and test files");
  }
  const Dataset tr = load_split(cfg.train_path, cfg.task, "train");
  const Dataset dev = load_split(cfg.dev_path, cfg.task, "dev");
  const Dataset test = load_split(cfg.test_path, cfg.task, "test");

  AblationOptions opts;
  opts.seeds = a.seeds;
  opts.margins = a.margins;
  if (!a.fusions.empty()) {
    opts.fusions.clear();
    for (const std::string& f : a.fusions) {
      try {
        opts.fusions.push_back(nn::parse_fusion(f));
      } catch (const std::exception& e) {
        throw UsageError("--fusions: " + std::string(e.what()));
      }
    }
  }
  manifest.seed = cfg.seed;
  manifest.config = to_text(cfg);
  for (const std::string& p : {cfg.train_path, cfg.dev_path, cfg.test_path}) {
    manifest.datasets[p] = sha256_file(p);
  }
  const fs::path dir = make_run_dir(a.base.out_dir_given ? a.base.common.out_dir : cfg.out_dir,
                                    cfg.seed);
  const auto table = run_ablation(cfg, tr, dev, test, opts,
                                  [](const AblationRow& row, const AblationRun& run) {
                                    std::cerr << row.name << " seed " << run.seed << ": acc "
                                              << run.test.accuracy << " micro-F1 "
                                              << run.test.micro.f1 << '\n';
                                  });
  const std::string lines = to_jsonl(table);
  write_text(dir / "ablation.jsonl", lines);
  write_manifest(dir, manifest);
  std::cout << lines;
  return kOk;
}

// ---- gradcheck -------------------------------------------------------------

int cmd_gradcheck(const Common& c, double tol, std::size_t trials,
                  const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.started = utc_timestamp();
  manifest.command = "gradcheck";
  manifest.argv = argv;
  manifest.seed = resolve_seed(c.seed, 11);
  ad::GradcheckOptions opts;
  opts.tolerance = tol;

  std::vector<std::pair<std::string, ad::SuiteResult>> all;
  for (auto& r : ad::op_suite(opts, trials, manifest.seed)) all.emplace_back("op", std::move(r));
  for (auto& r : pipeline_suite(opts, manifest.seed)) all.emplace_back("pipeline", std::move(r));

  std::ostringstream jsonl;
  std::size_t failed = 0;
  std::string first_failure;
  for (const auto& [group, r] : all) {
    double worst = 0.0;
    std::size_t checked = 0;
    for (const auto& e : r.report.entries) {
      worst = std::max(worst, e.max_relative_error);
      checked += e.checked;
    }
    if (!r.report.passed) {
      ++failed;
      if (first_failure.empty()) {
        first_failure = r.name + " [" + r.shape + "] on " + r.report.failing_parameters();
      }
    }
    std::cout << (r.report.passed ? "PASS " : "FAIL ") << group << ' ' << r.name << " ["
              << r.shape << "] max_rel_err=" << worst << " entries=" << checked << '\n';
    json j;
    j["group"] = group;
    j["name"] = r.name;
    j["shape"] = r.shape;
    j["passed"] = r.report.passed;
    j["max_relative_error"] = worst;
    j["entries"] = checked;
    j["failing"] = r.report.failing_parameters();
    jsonl << j.dump() << '\n';
  }
  std::cout << (all.size() - failed) << '/' << all.size() << " cases passed at tolerance " << tol
            << '\n';
  const fs::path dir = make_run_dir(c.out_dir, manifest.seed);
  write_text(dir / "gradcheck.jsonl", jsonl.str());
  write_manifest(dir, manifest);
  if (failed > 0) {
    throw CheckFailed(std::to_string(failed) + " gradcheck cases failed, first: " + first_failure);
  }
  return kOk;
}

// ---- bench -----------------------------------------------------------------

int cmd_bench(const Common& c, const std::string& data, tree::BenchOptions opts,
              const std::string& variant, const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.started = utc_timestamp();
  manifest.command = "bench";
  manifest.argv = argv;
  opts.seed = resolve_seed(c.seed, 1);
  opts.lstm_variant = nn::parse_lstm_variant(variant);
  manifest.seed = opts.seed;
  manifest.datasets[data] = sha256_file(data);
  const Dataset d = load_dataset(data);
  const std::string lines = tree::to_jsonl(tree::run_bench(d, opts));
  const fs::path dir = make_run_dir(c.out_dir, opts.seed);
  write_text(dir / "bench.jsonl", lines);
  write_manifest(dir, manifest);
  std::cout << lines;
  return kOk;
}

// ---- dedup -----------------------------------------------------------------

int cmd_dedup(const Common& c, const std::string& in_path, std::size_t threshold,
              const std::string& out_path, const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.started = utc_timestamp();
  manifest.command = "dedup";
  manifest.argv = argv;
  manifest.seed = resolve_seed(c.seed, 1);  // dedup is deterministic; recorded only
  manifest.datasets[in_path] = sha256_file(in_path);

  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot read '" + in_path + "'");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  // Cloze JSONL dedups on the stem field; anything else is one stem per line.
  const bool records = !lines.empty() && lines.front().front() == '{';
  std::vector<std::string> stems;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    stems.push_back(records ? heads::parse_cloze_record(lines[i], i + 1).stem : lines[i]);
  }
  const std::vector<std::string_view> views(stems.begin(), stems.end());
  const std::vector<std::size_t> kept = dedup_indices(views, threshold);
  std::string out;
  for (std::size_t i : kept) out += lines[i] + '\n';

  const fs::path dir = make_run_dir(c.out_dir, manifest.seed);
  const fs::path target = out_path.empty() ? dir / (records ? "dedup.jsonl" : "dedup.txt")
                                           : fs::path(out_path);
  write_text(target, out);
  write_manifest(dir, manifest);
  json j;
  j["input"] = lines.size();
  j["retained"] = kept.size();
  j["threshold"] = threshold;
  j["output"] = target.string();
  std::cout << j.dump() << '\n';
  return kOk;
}

// ---- gen -------------------------------------------------------------------

int cmd_gen(const Common& c, const std::string& task, std::size_t n, std::size_t n_dev,
            std::size_t n_test, const std::vector<std::string>& argv) {
  RunManifest manifest;
  manifest.started = utc_timestamp();
  manifest.command = "gen";
  manifest.argv = argv;
  manifest.seed = resolve_seed(c.seed, 1);
  const fs::path dir = make_run_dir(c.out_dir, manifest.seed);

  std::vector<std::pair<std::string, std::size_t>> splits = {{"train", n}};
  if (n_dev > 0) splits.emplace_back("dev", n_dev);
  if (n_test > 0) splits.emplace_back("test", n_test);
  json j;
  j["run_dir"] = dir.string();
  // Split k draws from seed + k so splits are independent samples.
  for (std::size_t k = 0; k < splits.size(); ++k) {
    const auto& [name, count] = splits[k];
    synth::GrammarSpec spec;
    spec.seed = manifest.seed + k;
    std::ostringstream records;
    std::vector<DepSentence> sentences;
    if (task == "cloze") {
      const auto qs = synth::gen_cloze(spec, count);
      heads::write_cloze(records, qs);
      for (const auto& q : qs) sentences.insert(sentences.end(), q.completions.begin(), q.completions.end());
    } else {
      const auto rs = synth::gen_relation(spec, count);
      heads::write_relations(records, rs);
      for (const auto& r : rs) sentences.push_back(r.sentence);
    }
    write_text(dir / (name + ".jsonl"), records.str());
    write_text(dir / (name + ".conllu"), to_conllu(sentences));
    j[name] = count;
  }

  // A starting config next to the data; paths resolve relative to it.
  std::string cfg = "task = " + task + "\ntrain = train.jsonl\n";
  cfg += n_dev > 0 ? "dev = dev.jsonl\n" : "dev = train.jsonl\n";
  if (n_test > 0) cfg += "test = test.jsonl\n";
  if (task == "cloze") cfg += "optimizer = adam\nlr = 0.01\n";
  cfg += "seed = " + std::to_string(manifest.seed) + "\n";
  write_text(dir / "dse.cfg", cfg);
  write_manifest(dir, manifest);
  std::cout << j.dump() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Dependency syntax expansion: parse, expand, train and evaluate."};
  app.name("dse");
  app.require_subcommand(1, 1);

  std::string file;
  bool validate_only = false;
  auto* parse = app.add_subcommand("parse", "Read and validate a CoNLL-U file");
  parse->add_option("file", file, "CoNLL-U input")->required();
  parse->add_flag("--validate-only", validate_only, "Print a summary instead of the sentences");
  Common parse_common;
  add_seed(parse, parse_common);

  auto* expand_cmd = app.add_subcommand("expand", "Print dependent/relation/head triples");
  expand_cmd->add_option("file", file, "CoNLL-U input")->required();
  Common expand_common;
  add_seed(expand_cmd, expand_common);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a model from a config file");
  train_cmd->add_option("--config", train_args.config, "Config file")->required();
  train_cmd->add_option("--set", train_args.sets, "Override a config field (key=value)");
  add_seed(train_cmd, train_args.common);
  auto* train_out = train_cmd->add_option("--out-dir", train_args.common.out_dir,
                                          "Parent directory for the run (default: out_dir)");

  Common eval_common;
  std::string ckpt, data;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a data file");
  eval_cmd->add_option("--ckpt", ckpt, "Checkpoint")->required();
  eval_cmd->add_option("--data", data, "Task JSONL file")->required();
  add_seed(eval_cmd, eval_common);
  add_out_dir(eval_cmd, eval_common);

  AblateArgs ablate_args;
  auto* ablate = app.add_subcommand("ablate", "Train every fusion row over several seeds");
  ablate->add_option("--config", ablate_args.base.config, "Config file")->required();
  ablate->add_option("--set", ablate_args.base.sets, "Override a config field (key=value)");
  ablate->add_option("--margins", ablate_args.margins, "Comma-separated margins to sweep")
      ->delimiter(',');
  ablate->add_option("--fusions", ablate_args.fusions,
                     "Comma-separated rows (concat, gate, head-only, word-only)")
      ->delimiter(',');
  ablate->add_option("--seeds", ablate_args.seeds, "Seeds per row")->capture_default_str();
  add_seed(ablate, ablate_args.base.common);
  auto* ablate_out = ablate->add_option("--out-dir", ablate_args.base.common.out_dir,
                                        "Parent directory for the run (default: out_dir)");

  Common gc_common;
  double tol = 1e-4;
  std::size_t trials = 6;
  auto* gc = app.add_subcommand("gradcheck", "Finite-difference check of every op and the model");
  gc->add_option("--tol", tol, "Relative tolerance")->capture_default_str();
  gc->add_option("--trials", trials, "Random shapes per op")->capture_default_str();
  add_seed(gc, gc_common);
  add_out_dir(gc, gc_common);

  Common bench_common;
  tree::BenchOptions bench_opts;
  std::string variant = "standard";
  auto* bench = app.add_subcommand("bench", "Seconds per epoch: Tree-LSTM vs expansion encoder");
  bench->add_option("--data", data, "Task JSONL file")->required();
  bench->add_option("--hidden", bench_opts.hidden, "Hidden size")->capture_default_str();
  bench->add_option("--epochs", bench_opts.epochs, "Timed epochs")->capture_default_str();
  bench->add_option("--batch", bench_opts.batch, "Batch size")->capture_default_str();
  bench->add_option("--variant", variant, "Sequence LSTM cell (standard, as-written)")
      ->capture_default_str();
  add_seed(bench, bench_common);
  add_out_dir(bench, bench_common);

  Common dedup_common;
  std::string in_path, out_path;
  std::size_t threshold = 8;
  auto* dedup = app.add_subcommand("dedup", "Drop near-duplicate question stems");
  dedup->add_option("--in", in_path, "Cloze JSONL or one stem per line")->required();
  dedup->add_option("--threshold", threshold, "Keep stems at distance >= threshold")
      ->capture_default_str();
  dedup->add_option("--out", out_path, "Output file (default: inside the run directory)");
  add_seed(dedup, dedup_common);
  add_out_dir(dedup, dedup_common);

  Common gen_common;
  std::string task;
  std::size_t n = 1000, n_dev = 0, n_test = 0;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic cloze or relation dataset");
  gen->add_option("task", task, "cloze or relation")
      ->required()
      ->check(CLI::IsMember({"cloze", "relation"}));
  gen->add_option("--n", n, "Training examples")->capture_default_str();
  gen->add_option("--dev", n_dev, "Dev examples");
  gen->add_option("--test", n_test, "Test examples");
  add_seed(gen, gen_common);
  add_out_dir(gen, gen_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    const auto used = app.get_subcommands();
    std::cerr << (used.empty() ? app.help() : used.back()->help());
    return fail("usage", e.what(), kUsage);
  }
  train_args.out_dir_given = train_out->count() > 0;
  ablate_args.base.out_dir_given = ablate_out->count() > 0;

  try {
    if (*parse) {
      resolve_seed(parse_common.seed, 1);
      return cmd_parse(file, validate_only);
    }
    if (*expand_cmd) {
      resolve_seed(expand_common.seed, 1);
      return cmd_expand(file);
    }
    if (*train_cmd) return cmd_train(train_args, args);
    if (*eval_cmd) return cmd_eval(eval_common, ckpt, data, args);
    if (*ablate) return cmd_ablate(ablate_args, args);
    if (*gc) return cmd_gradcheck(gc_common, tol, trials, args);
    if (*bench) return cmd_bench(bench_common, data, bench_opts, variant, args);
    if (*dedup) return cmd_dedup(dedup_common, in_path, threshold, out_path, args);
    if (*gen) return cmd_gen(gen_common, task, n, n_dev, n_test, args);
  } catch (const UsageError& e) {
    return fail("usage", e.what(), kUsage);
  } catch (const ConfigError& e) {
    return fail("config", e.what(), kConfig);
  } catch (const ConlluParseError& e) {
    return fail("conllu", e.what(), kInput);
  } catch (const TreeValidationError& e) {
    return fail("tree", e.what(), kInput);
  } catch (const heads::TaskFormatError& e) {
    return fail("task-format", e.what(), kInput);
  } catch (const TaskMismatchError& e) {
    return fail("task-mismatch", e.what(), kInput);
  } catch (const ad::CheckpointError& e) {
    return fail("checkpoint", e.what(), kInput);
  } catch (const TrainingDivergedError& e) {
    return fail("diverged", e.what(), kDiverged);
  } catch (const CheckFailed& e) {
    return fail("check", e.what(), kFailed);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), kFailed);
  }
  return kUsage;
}
