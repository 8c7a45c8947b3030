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

#ifndef SPATIALDEP_DECODER_HPP_
#define SPATIALDEP_DECODER_HPP_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spatialdep/document.hpp"
#include "spatialdep/graph.hpp"

namespace spatialdep {

// One field instance. Tokens are text indices (matrix columns), in reading order.
struct FieldChain {
  std::size_t field = 0;
  std::vector<int> tokens;

  friend bool operator==(const FieldChain&, const FieldChain&) = default;
};

// members[0] is the representative chain heading the group.
struct ChainGroup {
  std::vector<FieldChain> members;
  std::vector<ChainGroup> subgroups;

  friend bool operator==(const ChainGroup&, const ChainGroup&) = default;
};

// Token-level parse; the supervision label for a document.
struct ChainParse {
  std::vector<ChainGroup> groups;
  std::vector<FieldChain> ungrouped;

  friend bool operator==(const ChainParse&, const ChainParse&) = default;
};

using KeyValue = std::pair<std::string, std::string>;

struct Group {
  std::vector<KeyValue> members;
  std::vector<Group> subgroups;

  friend bool operator==(const Group&, const Group&) = default;
};

// Final hierarchical key-value parse.
struct Parse {
  std::vector<Group> groups;
  std::vector<KeyValue> ungrouped;

  friend bool operator==(const Parse&, const Parse&) = default;
};

struct Diagnostic {
  enum class Kind {
    kCycle,             // serialization revisited a node of its own chain
    kConsumed,          // serialization reached a node owned by an earlier chain
    kMultipleOutgoing,  // rel-s text row with several edges
    kTailCollision,     // column with several incoming edges in the input
    kUnusedGroupEdge,   // rel-g edge ignored by grouping
    kContestedMember,   // chain claimed by several group heads
  };
  Kind kind;
  std::string message;
};

std::string_view DiagnosticKindName(Diagnostic::Kind kind);

// Seed text indices per field, ascending.
std::vector<std::vector<int>> Seed(const RelationMatrix& serial, const FieldSchema& schema);

// Follows rel-s edges from every seed. Chains come out ordered by field,
// then by seed column; a node already owned by an earlier chain stops the walk.
std::vector<FieldChain> Serialize(const RelationMatrix& serial,
                                  const std::vector<std::vector<int>>& seeds,
                                  std::vector<Diagnostic>& diagnostics);

// Builds groups top-down, one round per information layer below the first.
// Membership is decided by rel-g edges between chain FIRST tokens. When
// group_probs is given, a chain claimed by several heads goes to the head with
// the larger edge probability; otherwise to the earliest head.
ChainParse GroupChains(const RelationMatrix& group, const std::vector<FieldChain>& chains,
                       const FieldSchema& schema, std::vector<Diagnostic>& diagnostics,
                       const Mat* group_probs = nullptr);

Parse Detokenize(const ChainParse& chains, std::span<const std::string> texts,
                 const FieldSchema& schema);

struct DecodeResult {
  ChainParse chains;
  Parse parse;
  std::vector<Diagnostic> diagnostics;

  int CountDiagnostics(Diagnostic::Kind kind) const;
};

DecodeResult Decode(const RelationMatrix& serial, const RelationMatrix& group,
                    const FieldSchema& schema, std::span<const std::string> texts,
                    const Mat* group_probs = nullptr);

// Inverse of Decode: builds (rel-s, rel-g) matrices from a token-level parse.
// Throws std::invalid_argument on a token used twice, an out-of-range token,
// an empty chain, or a group not headed by the right representative.
std::pair<RelationMatrix, RelationMatrix> EncodeParse(const ChainParse& parse,
                                                      const FieldSchema& schema, int n_text);

// Orders groups, members and ungrouped chains by (field index, first token),
// keeping each group's head first. Decode output is already in this order.
void Canonicalize(ChainParse& parse);

// Every (field, value) pair with nested subgroups flattened into their group.
std::vector<KeyValue> FlattenGroup(const Group& group);

}  // namespace spatialdep

#endif  // SPATIALDEP_DECODER_HPP_
