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

#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "dse/config.hpp"

using namespace dse;

namespace {

std::string error_field(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults are the desk-scale settings") {
  const ModelConfig c = parse_config("");
  CHECK(c.word_dim == 32);
  CHECK(c.hidden == 64);
  CHECK(c.batch == 16);
  CHECK(c.epochs == 20);
  CHECK(c.margin == 0.5);
  CHECK(c.clip == 5.0);
  CHECK(c.warmup == 0.05);
  CHECK(c.optimizer == OptimizerKind::kSgd);
  CHECK(c.lstm_variant == nn::LstmVariant::kAsWritten);
}

TEST_CASE("comments, blanks and spacing are ignored") {
  const ModelConfig c = parse_config(
      "# header\n"
      "\n"
      "task=relation   # trailing\n"
      "  hidden =  12\n"
      "fusion = word-only\n"
      "optimizer = adam\n"
      "freeze_bilm = true\n");
  CHECK(c.task == TaskType::kRelation);
  CHECK(c.hidden == 12);
  CHECK(c.fusion == nn::Fusion::kWordOnly);
  CHECK(c.optimizer == OptimizerKind::kAdam);
  CHECK(c.freeze_bilm);
}

TEST_CASE("bad configs name the offending field") {
  CHECK(error_field("hidden = 4\nhidden = 5\n") == "hidden");
  CHECK(error_field("colour = blue\n") == "colour");
  CHECK(error_field("hidden = many\n") == "hidden");
  CHECK(error_field("hidden = 0\n") == "hidden");
  CHECK(error_field("d = 0\n") == "d");
  CHECK(error_field("task = tagging\n") == "task");
  CHECK(error_field("fusion = sum\n") == "fusion");
  CHECK(error_field("freeze_bilm = maybe\n") == "freeze_bilm");
  CHECK(error_field("warmup = 1\n") == "warmup");
  CHECK(error_field("lr = -0.1\n") == "lr");
  CHECK(error_field("encoder = external-file\n") == "embeddings");
  CHECK(error_field("just words\n") == "line 1");
}

TEST_CASE("gate fusion ties d_r to d") {
  const ModelConfig c = parse_config("fusion = gate\nd = 24\n");
  CHECK(c.rel_dim == 24);
  CHECK(error_field("fusion = gate\nd = 24\nd_r = 16\n") == "d_r");
  CHECK(parse_config("fusion = concat\nd = 24\nd_r = 16\n").rel_dim == 16);
}

TEST_CASE("bilm encoder derives d from lm_hidden") {
  CHECK(parse_config("encoder = bilm\nlm_hidden = 10\n").word_dim == 20);
  CHECK(error_field("encoder = bilm\nlm_hidden = 10\nd = 8\n") == "d");
}

TEST_CASE("to_text round trips") {
  ModelConfig c = parse_config(
      "task = relation\nfusion = gate\nd = 12\nhidden = 7\nmargin = 0.1\nlr = 0.003\n"
      "warmup = 0.2\nclip = 1.5\nseed = 99\nlstm_variant = standard\noptimizer = adam\n"
      "train = /data/train.jsonl\n");
  const std::string text = to_text(c);
  const ModelConfig back = parse_config(text);
  CHECK(to_text(back) == text);
  CHECK(back.lr == c.lr);
  CHECK(back.margin == c.margin);
  CHECK(back.rel_dim == 12);
  CHECK(back.seed == 99);
  CHECK(back.train_path == "/data/train.jsonl");
}

TEST_CASE("relative paths resolve against the config's directory") {
  const auto dir = std::filesystem::temp_directory_path() / "dse_config_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "run.cfg";
  {
    std::ofstream out(file);
    out << "train = data/train.jsonl\ntest = /abs/test.jsonl\n";
  }
  const ModelConfig c = load_config(file.string());
  CHECK(std::filesystem::path(c.train_path) == dir / "data/train.jsonl");
  CHECK(c.test_path == "/abs/test.jsonl");
  std::filesystem::remove_all(dir);

  try {
    load_config((dir / "missing.cfg").string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "config");
  }
}

TEST_CASE("overrides go through the same field parser") {
  ModelConfig c;
  set_config_field(c, "epochs", "3");
  CHECK(c.epochs == 3);
  CHECK_THROWS_AS(set_config_field(c, "epoch", "3"), ConfigError);
}
