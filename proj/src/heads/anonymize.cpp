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

#include "dse/anonymize.hpp"

#include <stdexcept>
#include <string>

namespace dse::heads {

namespace {

struct Replacement {
  Span span;
  const char* form;
};

int depth_of(const DepSentence& s, int index) {
  int depth = 0;
  for (int cur = index; cur != 0; cur = s.tokens[static_cast<std::size_t>(cur - 1)].head) {
    ++depth;
  }
  return depth;
}

}  // namespace

AnonymizedSentence anonymize(const DepSentence& sentence, Span e1, Span e2,
                             std::span<const Span> others) {
  const int n = static_cast<int>(sentence.tokens.size());
  std::vector<Replacement> reps = {{e1, "drug1"}, {e2, "drug2"}};
  for (const Span& s : others) reps.push_back({s, "drug0"});

  // owner[i] = replacement covering token i (0-based), or -1.
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const Span s = reps[r].span;
    if (s.begin < 0 || s.end > n || s.begin >= s.end) {
      throw std::invalid_argument("anonymize: span [" + std::to_string(s.begin) + ", " +
                                  std::to_string(s.end) + ") invalid for " +
                                  std::to_string(n) + " tokens");
    }
    for (int i = s.begin; i < s.end; ++i) {
      if (owner[static_cast<std::size_t>(i)] != -1) {
        throw std::invalid_argument("anonymize: overlapping spans at token " + std::to_string(i));
      }
      owner[static_cast<std::size_t>(i)] = static_cast<int>(r);
    }
  }

  // The highest token of each span (smallest depth) represents it.
  std::vector<int> span_head(reps.size(), -1);
  for (std::size_t r = 0; r < reps.size(); ++r) {
    int best_depth = 0;
    for (int i = reps[r].span.begin; i < reps[r].span.end; ++i) {
      const int d = depth_of(sentence, i + 1);
      if (span_head[r] == -1 || d < best_depth) {
        span_head[r] = i;
        best_depth = d;
      }
    }
  }

  // Old 0-based position -> new 0-based position.
  std::vector<int> remap(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int r = owner[static_cast<std::size_t>(i)];
    if (r == -1 || i == reps[static_cast<std::size_t>(r)].span.begin) {
      remap[static_cast<std::size_t>(i)] = next++;
    } else {
      remap[static_cast<std::size_t>(i)] = remap[static_cast<std::size_t>(reps[static_cast<std::size_t>(r)].span.begin)];
    }
  }

  AnonymizedSentence out;
  out.sentence.sent_id = sentence.sent_id;
  out.sentence.comments = sentence.comments;
  for (int i = 0; i < n; ++i) {
    const int r = owner[static_cast<std::size_t>(i)];
    if (r != -1 && i != reps[static_cast<std::size_t>(r)].span.begin) continue;
    const int source = r == -1 ? i : span_head[static_cast<std::size_t>(r)];
    Token t = sentence.tokens[static_cast<std::size_t>(source)];
    t.index = remap[static_cast<std::size_t>(i)] + 1;
    t.head = t.head == 0 ? 0 : remap[static_cast<std::size_t>(t.head - 1)] + 1;
    if (r != -1) {
      t.form = reps[static_cast<std::size_t>(r)].form;
      t.lemma = t.form;
    }
    out.sentence.tokens.push_back(std::move(t));
  }
  out.e1 = remap[static_cast<std::size_t>(e1.begin)];
  out.e2 = remap[static_cast<std::size_t>(e2.begin)];
  for (const Span& s : others) out.others.push_back(remap[static_cast<std::size_t>(s.begin)]);
  return out;
}

}  // namespace dse::heads
