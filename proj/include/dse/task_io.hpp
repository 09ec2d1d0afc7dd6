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

#ifndef DSE_TASK_IO_HPP_
#define DSE_TASK_IO_HPP_

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dse/anonymize.hpp"
#include "dse/conllu.hpp"
#include "dse/task_heads.hpp"

namespace dse::heads {

// One gap-filling question. Multi-gap options list their fills separated by
// commas ("either,or"); completions[k] is the parsed sentence with option k
// filled in.
struct ClozeQuestion {
  std::string stem;
  std::array<std::string, kOptions> options;
  int answer = 0;
  std::array<DepSentence, kOptions> completions;
};

// A relation example as stored on disk, before anonymization.
struct RelationRecord {
  DepSentence sentence;
  Span e1;
  Span e2;
  std::vector<Span> others;
  RelationLabel label = RelationLabel::kNegative;
};

// A relation example as consumed by the model.
struct RelationInstance {
  DepSentence sentence;
  int e1 = 0;
  int e2 = 0;
  RelationLabel label = RelationLabel::kNegative;
};

RelationInstance to_instance(const RelationRecord& record);

enum class TaskKind { kCloze, kRelation };

class TaskFormatError : public std::runtime_error {
 public:
  TaskFormatError(std::size_t line, const std::string& message);
};

// Line-delimited JSON. Field names are documented in docs/schemas/.
std::string to_jsonl(const ClozeQuestion& q);
std::string to_jsonl(const RelationRecord& r);
ClozeQuestion parse_cloze_record(const std::string& line, std::size_t line_no = 0);
RelationRecord parse_relation_record(const std::string& line, std::size_t line_no = 0);

void write_cloze(std::ostream& out, const std::vector<ClozeQuestion>& questions);
void write_relations(std::ostream& out, const std::vector<RelationRecord>& records);
std::vector<ClozeQuestion> read_cloze(std::istream& in);
std::vector<RelationRecord> read_relations(std::istream& in);

// Decides the task from the first record's fields.
TaskKind detect_task(const std::string& path);
std::vector<ClozeQuestion> load_cloze(const std::string& path);
std::vector<RelationRecord> load_relations(const std::string& path);

}  // namespace dse::heads

#endif  // DSE_TASK_IO_HPP_
