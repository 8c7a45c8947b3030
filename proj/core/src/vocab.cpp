// Copyright 2026 The spatialdep Authors.
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

#include "spatialdep/vocab.hpp"

#include <map>
#include <stdexcept>

namespace spatialdep {

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{kUnkText}) {}

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  if (words_.empty() || words_[0] != kUnkText) {
    throw std::invalid_argument("vocabulary must start with the unknown-token entry");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<int>(i)).second) {
      throw std::invalid_argument("duplicate vocabulary entry '" + words_[i] + "'");
    }
  }
}

Vocabulary Vocabulary::Build(std::span<const Document> docs, int min_count) {
  std::map<std::string, int> counts;
  for (const Document& d : docs) {
    for (const Token& t : d.tokens) ++counts[t.text];
  }
  std::vector<std::string> words{kUnkText};
  for (const auto& [w, c] : counts) {
    if (c >= min_count && w != kUnkText) words.push_back(w);
  }
  return Vocabulary(std::move(words));
}

int Vocabulary::Id(const std::string& text) const {
  auto it = index_.find(text);
  return it == index_.end() ? kUnk : it->second;
}

std::vector<int> Vocabulary::Ids(const Document& doc) const {
  std::vector<int> ids;
  ids.reserve(doc.tokens.size());
  for (const Token& t : doc.tokens) ids.push_back(Id(t.text));
  return ids;
}

}  // namespace spatialdep
