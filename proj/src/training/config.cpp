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

#include "dse/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace dse {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key, "expected a number, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key, "expected true/false, got '" + value + "'");
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || base_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base_dir) / path).lexically_normal().string();
}

template <typename Fn>
auto enum_field(const std::string& key, Fn parse) {
  try {
    return parse();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error("config error [" + field + "]: " + message), field_(std::move(field)) {}

std::string_view to_string(TaskType t) { return t == TaskType::kCloze ? "cloze" : "relation"; }

std::string_view to_string(EncoderKind e) {
  switch (e) {
    case EncoderKind::kRandomEmbed: return "random-embed";
    case EncoderKind::kBiLm: return "bilm";
    case EncoderKind::kExternalFile: return "external-file";
  }
  return "random-embed";
}

std::string_view to_string(OptimizerKind o) { return o == OptimizerKind::kSgd ? "sgd" : "adam"; }

void set_config_field(ModelConfig& c, const std::string& key, const std::string& value,
                      const std::string& base_dir) {
  if (key == "task") {
    if (value == "cloze") c.task = TaskType::kCloze;
    else if (value == "relation") c.task = TaskType::kRelation;
    else throw ConfigError(key, "expected cloze or relation, got '" + value + "'");
  } else if (key == "encoder") {
    if (value == "random-embed") c.encoder = EncoderKind::kRandomEmbed;
    else if (value == "bilm") c.encoder = EncoderKind::kBiLm;
    else if (value == "external-file") c.encoder = EncoderKind::kExternalFile;
    else throw ConfigError(key, "expected random-embed, bilm or external-file, got '" + value + "'");
  } else if (key == "fusion") {
    c.fusion = enum_field(key, [&] { return nn::parse_fusion(value); });
  } else if (key == "lstm_variant") {
    c.lstm_variant = enum_field(key, [&] { return nn::parse_lstm_variant(value); });
  } else if (key == "optimizer") {
    if (value == "sgd") c.optimizer = OptimizerKind::kSgd;
    else if (value == "adam") c.optimizer = OptimizerKind::kAdam;
    else throw ConfigError(key, "expected sgd or adam, got '" + value + "'");
  } else if (key == "d") {
    c.word_dim = parse_number<std::size_t>(key, value);
  } else if (key == "d_r") {
    c.rel_dim = parse_number<std::size_t>(key, value);
  } else if (key == "hidden") {
    c.hidden = parse_number<std::size_t>(key, value);
  } else if (key == "lm_hidden") {
    c.lm_hidden = parse_number<std::size_t>(key, value);
  } else if (key == "margin") {
    c.margin = parse_number<double>(key, value);
  } else if (key == "lr") {
    c.lr = parse_number<double>(key, value);
  } else if (key == "warmup") {
    c.warmup = parse_number<double>(key, value);
  } else if (key == "clip") {
    c.clip = parse_number<double>(key, value);
  } else if (key == "batch") {
    c.batch = parse_number<std::size_t>(key, value);
  } else if (key == "max_len") {
    c.max_len = parse_number<std::size_t>(key, value);
  } else if (key == "epochs") {
    c.epochs = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "freeze_bilm") {
    c.freeze_bilm = parse_bool(key, value);
  } else if (key == "bilm_epochs") {
    c.bilm_epochs = parse_number<std::size_t>(key, value);
  } else if (key == "bilm_lr") {
    c.bilm_lr = parse_number<double>(key, value);
  } else if (key == "train") {
    c.train_path = resolve(base_dir, value);
  } else if (key == "dev") {
    c.dev_path = resolve(base_dir, value);
  } else if (key == "test") {
    c.test_path = resolve(base_dir, value);
  } else if (key == "embeddings") {
    c.embeddings_path = resolve(base_dir, value);
  } else if (key == "out_dir") {
    c.out_dir = resolve(base_dir, value);
  } else {
    throw ConfigError(key, "unknown key");
  }
}

void ModelConfig::validate() const {
  if (word_dim == 0) throw ConfigError("d", "must be positive");
  if (rel_dim == 0) throw ConfigError("d_r", "must be positive");
  if (hidden == 0) throw ConfigError("hidden", "must be positive");
  if (batch == 0) throw ConfigError("batch", "must be positive");
  if (max_len == 0) throw ConfigError("max_len", "must be positive");
  if (fusion == nn::Fusion::kGate && rel_dim != word_dim) {
    throw ConfigError("d_r", "gate fusion needs d_r = d (" + std::to_string(rel_dim) +
                                 " vs " + std::to_string(word_dim) + ")");
  }
  if (encoder == EncoderKind::kBiLm && word_dim != 2 * lm_hidden) {
    throw ConfigError("d", "bilm encoder needs d = 2 * lm_hidden");
  }
  if (encoder == EncoderKind::kExternalFile && embeddings_path.empty()) {
    throw ConfigError("embeddings", "external-file encoder needs an embeddings path");
  }
  if (!(lr >= 0.0)) throw ConfigError("lr", "must be non-negative");
  if (!(margin >= 0.0)) throw ConfigError("margin", "must be non-negative");
  if (!(clip >= 0.0)) throw ConfigError("clip", "must be non-negative");
  if (!(warmup >= 0.0 && warmup < 1.0)) throw ConfigError("warmup", "must be in [0, 1)");
}

ModelConfig parse_config(const std::string& text, const std::string& base_dir) {
  ModelConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(key, "given twice");
    set_config_field(c, key, value, base_dir);
  }
  if (c.fusion == nn::Fusion::kGate && !seen.contains("d_r")) c.rel_dim = c.word_dim;
  if (c.encoder == EncoderKind::kBiLm && !seen.contains("d")) c.word_dim = 2 * c.lm_hidden;
  c.validate();
  return c;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::filesystem::path(path).parent_path().string());
}

namespace {

// Shortest text that parses back to the same double.
std::string num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::string to_text(const ModelConfig& c) {
  std::ostringstream out;
  out << "task = " << to_string(c.task) << '\n'
      << "encoder = " << to_string(c.encoder) << '\n'
      << "fusion = " << nn::to_string(c.fusion) << '\n'
      << "lstm_variant = " << nn::to_string(c.lstm_variant) << '\n'
      << "d = " << c.word_dim << '\n'
      << "d_r = " << c.rel_dim << '\n'
      << "hidden = " << c.hidden << '\n'
      << "lm_hidden = " << c.lm_hidden << '\n'
      << "margin = " << num(c.margin) << '\n'
      << "lr = " << num(c.lr) << '\n'
      << "optimizer = " << to_string(c.optimizer) << '\n'
      << "warmup = " << num(c.warmup) << '\n'
      << "clip = " << num(c.clip) << '\n'
      << "batch = " << c.batch << '\n'
      << "max_len = " << c.max_len << '\n'
      << "epochs = " << c.epochs << '\n'
      << "seed = " << c.seed << '\n'
      << "freeze_bilm = " << (c.freeze_bilm ? "true" : "false") << '\n'
      << "bilm_epochs = " << c.bilm_epochs << '\n'
      << "bilm_lr = " << num(c.bilm_lr) << '\n';
  if (!c.train_path.empty()) out << "train = " << c.train_path << '\n';
  if (!c.dev_path.empty()) out << "dev = " << c.dev_path << '\n';
  if (!c.test_path.empty()) out << "test = " << c.test_path << '\n';
  if (!c.embeddings_path.empty()) out << "embeddings = " << c.embeddings_path << '\n';
  out << "out_dir = " << c.out_dir << '\n';
  return out.str();
}

}  // namespace dse
