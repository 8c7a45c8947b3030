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

#include "spatialdep/document.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace spatialdep {

std::vector<Point> Document::Centers() const {
  std::vector<Point> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.box.center());
  return out;
}

std::vector<std::string> Document::Texts() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.text);
  return out;
}

void FieldSchema::Validate() const {
  if (fields.empty()) throw std::invalid_argument("schema has no fields");
  if (depth < 1) throw std::invalid_argument("schema depth must be >= 1");
  std::set<std::string> seen;
  for (const auto& f : fields) {
    if (!seen.insert(f).second) throw std::invalid_argument("duplicate field '" + f + "'");
  }
  for (const auto& [layer, name] : representative) {
    if (layer < 2 || layer > depth) {
      throw std::invalid_argument("representative layer " + std::to_string(layer) +
                                  " outside [2, depth]");
    }
    if (!seen.contains(name)) {
      throw std::invalid_argument("representative '" + name + "' is not a schema field");
    }
  }
  for (int layer = 2; layer <= depth; ++layer) {
    if (!representative.contains(layer)) {
      throw std::invalid_argument("missing representative for layer " + std::to_string(layer));
    }
  }
}

std::optional<std::size_t> FieldSchema::FieldIndex(const std::string& name) const {
  auto it = std::find(fields.begin(), fields.end(), name);
  if (it == fields.end()) return std::nullopt;
  return static_cast<std::size_t>(it - fields.begin());
}

std::optional<int> FieldSchema::RepresentativeLayer(std::size_t field) const {
  if (field >= fields.size()) return std::nullopt;
  for (const auto& [layer, name] : representative) {
    if (name == fields[field]) return layer;
  }
  return std::nullopt;
}

std::uint64_t FieldSchema::Hash() const {
  std::string text = "depth=" + std::to_string(depth) + ";fields=";
  for (const auto& f : fields) text += f + ",";
  text += ";rep=";
  for (const auto& [layer, name] : representative) text += std::to_string(layer) + ":" + name + ",";
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace spatialdep
