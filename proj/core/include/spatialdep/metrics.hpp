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

#ifndef SPATIALDEP_METRICS_HPP_
#define SPATIALDEP_METRICS_HPP_

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spatialdep/decoder.hpp"
#include "spatialdep/graph.hpp"

namespace spatialdep {

enum class GroupMatching { kGreedy, kHungarian };

struct MatchConfig {
  std::set<std::string> tolerant_fields;
  int max_ed = 2;              // tolerant match when ED < max_ed
  double max_ed_ratio = 0.4;   // ... or when ED / len(gt) <= max_ed_ratio
  bool ignore_whitespace = false;
  GroupMatching matching = GroupMatching::kGreedy;

  void Validate() const;
};

struct PRF {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  // An empty comparison (no predictions, no references) scores 1.
  double precision() const;
  double recall() const;
  double f1() const;

  PRF& operator+=(const PRF& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const PRF&, const PRF&) = default;
};

// Levenshtein distance over Unicode code points (UTF-8 input), unit costs.
int EditDistance(std::string_view a, std::string_view b);

// True when pred counts as gt for this field.
bool ValuesMatch(const std::string& field, const std::string& pred, const std::string& gt,
                 const MatchConfig& cfg);

struct ParseScore {
  PRF overall;
  std::map<std::string, PRF> per_field;

  ParseScore& operator+=(const ParseScore& o);
};

// Per document: match predicted groups to gt groups by edit distance over
// the concatenated member values, then count (field, value) pairs inside
// matched groups. Subgroups are flattened into their top-level group, and the
// ungrouped pairs of both sides are compared as one extra group.
ParseScore ScoreParse(const Parse& pred, const Parse& gt, const MatchConfig& cfg);

ParseScore ParseF1(std::span<const Parse> pred, std::span<const Parse> gt, const MatchConfig& cfg);

// Set comparison of edges.
PRF EdgePRF(const RelationMatrix& pred, const RelationMatrix& gt);

// Minimum-cost assignment on a rectangular cost matrix. Returns, for each
// row, the assigned column or -1 (when rows > cols).
std::vector<int> HungarianAssign(const std::vector<std::vector<double>>& cost);

// Greedy assignment: repeatedly take the cheapest remaining (row, col) pair,
// ties broken by row then column index.
std::vector<int> GreedyAssign(const std::vector<std::vector<double>>& cost);

}  // namespace spatialdep

#endif  // SPATIALDEP_METRICS_HPP_
