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

#include "dse/task_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace dse::heads {

using nlohmann::json;

namespace {

json span_json(const Span& s) { return json::array({s.begin, s.end}); }

Span parse_span(const json& j, std::size_t line_no, const char* field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw TaskFormatError(line_no, std::string(field) + " must be [begin, end]");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

DepSentence parse_single(const std::string& text, std::size_t line_no, const std::string& field) {
  try {
    auto sentences = parse_conllu_string(text);
    if (sentences.size() != 1) {
      throw TaskFormatError(line_no, field + " must hold exactly one sentence");
    }
    return std::move(sentences.front());
  } catch (const ConlluParseError& e) {
    throw TaskFormatError(line_no, field + ": " + e.what());
  } catch (const TreeValidationError& e) {
    throw TaskFormatError(line_no, field + ": " + e.what());
  }
}

json parse_json(const std::string& line, std::size_t line_no) {
  try {
    json j = json::parse(line);
    if (!j.is_object()) throw TaskFormatError(line_no, "record is not an object");
    return j;
  } catch (const json::parse_error& e) {
    throw TaskFormatError(line_no, std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T require(const json& j, const char* key, std::size_t line_no) {
  if (!j.contains(key)) throw TaskFormatError(line_no, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw TaskFormatError(line_no, std::string("field '") + key + "' has the wrong type");
  }
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

TaskFormatError::TaskFormatError(std::size_t line, const std::string& message)
    : std::runtime_error("record " + std::to_string(line) + ": " + message) {}

RelationInstance to_instance(const RelationRecord& record) {
  AnonymizedSentence a = anonymize(record.sentence, record.e1, record.e2, record.others);
  return {std::move(a.sentence), a.e1, a.e2, record.label};
}

std::string to_jsonl(const ClozeQuestion& q) {
  json j;
  j["stem"] = q.stem;
  j["options"] = q.options;
  j["answer"] = q.answer;
  json conllu = json::array();
  for (const auto& s : q.completions) conllu.push_back(to_conllu(s));
  j["conllu"] = conllu;
  return j.dump();
}

std::string to_jsonl(const RelationRecord& r) {
  json j;
  j["conllu"] = to_conllu(r.sentence);
  j["e1"] = span_json(r.e1);
  j["e2"] = span_json(r.e2);
  json others = json::array();
  for (const auto& s : r.others) others.push_back(span_json(s));
  j["others"] = others;
  j["label"] = std::string(to_string(r.label));
  return j.dump();
}

ClozeQuestion parse_cloze_record(const std::string& line, std::size_t line_no) {
  const json j = parse_json(line, line_no);
  ClozeQuestion q;
  q.stem = require<std::string>(j, "stem", line_no);
  const auto options = require<std::vector<std::string>>(j, "options", line_no);
  if (options.size() != kOptions) throw TaskFormatError(line_no, "options must hold 4 entries");
  std::copy(options.begin(), options.end(), q.options.begin());
  q.answer = require<int>(j, "answer", line_no);
  if (q.answer < 0 || q.answer >= static_cast<int>(kOptions)) {
    throw TaskFormatError(line_no, "answer must be in 0..3");
  }
  const auto conllu = require<std::vector<std::string>>(j, "conllu", line_no);
  if (conllu.size() != kOptions) throw TaskFormatError(line_no, "conllu must hold 4 entries");
  for (std::size_t k = 0; k < kOptions; ++k) {
    q.completions[k] = parse_single(conllu[k], line_no, "conllu[" + std::to_string(k) + "]");
  }
  return q;
}

RelationRecord parse_relation_record(const std::string& line, std::size_t line_no) {
  const json j = parse_json(line, line_no);
  RelationRecord r;
  r.sentence = parse_single(require<std::string>(j, "conllu", line_no), line_no, "conllu");
  if (!j.contains("e1") || !j.contains("e2")) throw TaskFormatError(line_no, "missing entity span");
  r.e1 = parse_span(j["e1"], line_no, "e1");
  r.e2 = parse_span(j["e2"], line_no, "e2");
  if (j.contains("others")) {
    if (!j["others"].is_array()) throw TaskFormatError(line_no, "others must be an array");
    for (const auto& s : j["others"]) r.others.push_back(parse_span(s, line_no, "others"));
  }
  try {
    r.label = parse_relation_label(require<std::string>(j, "label", line_no));
    // Rejects bad spans up front rather than at training time.
    (void)anonymize(r.sentence, r.e1, r.e2, r.others);
  } catch (const std::invalid_argument& e) {
    throw TaskFormatError(line_no, e.what());
  }
  return r;
}

void write_cloze(std::ostream& out, const std::vector<ClozeQuestion>& questions) {
  for (const auto& q : questions) out << to_jsonl(q) << '\n';
}

void write_relations(std::ostream& out, const std::vector<RelationRecord>& records) {
  for (const auto& r : records) out << to_jsonl(r) << '\n';
}

std::vector<ClozeQuestion> read_cloze(std::istream& in) {
  std::vector<ClozeQuestion> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    out.push_back(parse_cloze_record(line, line_no));
  }
  return out;
}

std::vector<RelationRecord> read_relations(std::istream& in) {
  std::vector<RelationRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    out.push_back(parse_relation_record(line, line_no));
  }
  return out;
}

TaskKind detect_task(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const json j = parse_json(line, line_no);
    if (j.contains("options")) return TaskKind::kCloze;
    if (j.contains("label")) return TaskKind::kRelation;
    throw TaskFormatError(line_no, "neither a cloze nor a relation record");
  }
  throw std::runtime_error(path + ": no records");
}

std::vector<ClozeQuestion> load_cloze(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_cloze(in);
}

std::vector<RelationRecord> load_relations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_relations(in);
}

}  // namespace dse::heads
