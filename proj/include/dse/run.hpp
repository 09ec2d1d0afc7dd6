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

#ifndef DSE_RUN_HPP_
#define DSE_RUN_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dse {

inline constexpr std::string_view kCodeVersion = "0.1.0";

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// <root>/<UTC yyyymmddThhmmssZ>-seed<seed>, with a -N suffix if taken.
std::filesystem::path make_run_dir(const std::filesystem::path& root, std::uint64_t seed);

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::uint64_t seed = 0;
  std::string config;  // resolved config text, empty for config-less commands
  std::map<std::string, std::string> datasets;  // path -> sha256
  std::map<std::string, std::string> outputs;   // file name in run dir -> sha256
  std::string started;
  std::string finished;
};

std::string utc_timestamp();
// Fills outputs from every regular file in `dir` (manifest.json excluded)
// and writes dir/manifest.json.
void write_manifest(const std::filesystem::path& dir, RunManifest manifest);

}  // namespace dse

#endif  // DSE_RUN_HPP_
