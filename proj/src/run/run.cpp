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

#include "dse/run.hpp"

#include <openssl/evp.h>

#include <array>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dse {

namespace {

std::string hex(const unsigned char* data, unsigned int n) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (unsigned int i = 0; i < n; ++i) {
    out += digits[data[i] >> 4];
    out += digits[data[i] & 0xf];
  }
  return out;
}

std::string format_utc(const char* fmt) {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), fmt, &tm);
  return buf.data();
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int n = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &n, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  return hex(md.data(), n);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

std::string utc_timestamp() { return format_utc("%Y-%m-%dT%H:%M:%SZ"); }

std::filesystem::path make_run_dir(const std::filesystem::path& root, std::uint64_t seed) {
  const std::string base = format_utc("%Y%m%dT%H%M%SZ") + "-seed" + std::to_string(seed);
  std::filesystem::create_directories(root);
  std::filesystem::path dir = root / base;
  for (int n = 2; !std::filesystem::create_directory(dir); ++n) {
    dir = root / (base + "-" + std::to_string(n));
  }
  return dir;
}

void write_manifest(const std::filesystem::path& dir, RunManifest manifest) {
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name == "manifest.json") continue;
    manifest.outputs[name] = sha256_file(entry.path());
  }
  if (manifest.finished.empty()) manifest.finished = utc_timestamp();
  nlohmann::ordered_json j;
  j["command"] = manifest.command;
  j["argv"] = manifest.argv;
  j["seed"] = manifest.seed;
  j["code_version"] = kCodeVersion;
  j["config"] = manifest.config;
  j["datasets"] = manifest.datasets;
  j["outputs"] = manifest.outputs;
  j["started"] = manifest.started;
  j["finished"] = manifest.finished;
  std::ofstream out(dir / "manifest.json");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write manifest in '" + dir.string() + "'");
}

}  // namespace dse
