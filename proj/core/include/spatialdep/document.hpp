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

#ifndef SPATIALDEP_DOCUMENT_HPP_
#define SPATIALDEP_DOCUMENT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spatialdep/geometry.hpp"

namespace spatialdep {

struct Token {
  std::string text;
  TokenBox box;

  friend bool operator==(const Token&, const Token&) = default;
};

// OCR output. Token order carries no meaning.
struct Document {
  std::string id;
  double width = 0.0;
  double height = 0.0;
  std::vector<Token> tokens;

  std::vector<Point> Centers() const;
  std::vector<std::string> Texts() const;

  friend bool operator==(const Document&, const Document&) = default;
};

// Field inventory plus the representative field of each information layer.
// Layer 1 is the flat field layer; layers 2..depth each have a representative
// whose chains head groups at that layer.
struct FieldSchema {
  std::vector<std::string> fields;
  int depth = 1;
  std::map<int, std::string> representative;

  // Throws std::invalid_argument when inconsistent.
  void Validate() const;

  std::size_t size() const { return fields.size(); }
  std::optional<std::size_t> FieldIndex(const std::string& name) const;
  // Layer whose representative is this field, if any.
  std::optional<int> RepresentativeLayer(std::size_t field) const;

  // FNV-1a over a canonical text rendering; identifies a schema in checkpoints.
  std::uint64_t Hash() const;

  friend bool operator==(const FieldSchema&, const FieldSchema&) = default;
};

}  // namespace spatialdep

#endif  // SPATIALDEP_DOCUMENT_HPP_
