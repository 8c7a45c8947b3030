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

#ifndef SPATIALDEP_VOCAB_HPP_
#define SPATIALDEP_VOCAB_HPP_

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "spatialdep/document.hpp"

namespace spatialdep {

// Exact-match token vocabulary. Id 0 is reserved for unknown strings.
class Vocabulary {
 public:
  static constexpr int kUnk = 0;
  static constexpr const char* kUnkText = "<unk>";

  Vocabulary();
  explicit Vocabulary(std::vector<std::string> words);  // words[0] must be kUnkText

  // Strings seen at least min_count times, sorted for determinism.
  static Vocabulary Build(std::span<const Document> docs, int min_count);

  int Id(const std::string& text) const;
  std::vector<int> Ids(const Document& doc) const;
  const std::string& Word(int id) const { return words_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace spatialdep

#endif  // SPATIALDEP_VOCAB_HPP_
