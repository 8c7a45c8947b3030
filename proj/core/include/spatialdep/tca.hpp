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

#ifndef SPATIALDEP_TCA_HPP_
#define SPATIALDEP_TCA_HPP_

#include "spatialdep/graph.hpp"

namespace spatialdep {

struct TcaResult {
  RelationMatrix matrix;
  bool converged = false;
  int iterations = 0;
};

// Tail collision avoidance. Repeats until no column has two incoming edges
// or max_iter rounds have run:
//   1. at every tail with several incoming edges keep only the most probable
//      one (lower row index on ties);
//   2. every head that lost an edge moves to its next most probable column,
//      provided that column is >= p_th, lies in the head's top three columns,
//      and has not been tried by that head before.
TcaResult ResolveCollisions(const EdgeProbabilities& probs, const RelationMatrix& matrix,
                            double p_th = 0.5, int max_iter = 20);

// Number of columns with two or more incoming edges.
int CountTailCollisions(const RelationMatrix& matrix);

}  // namespace spatialdep

#endif  // SPATIALDEP_TCA_HPP_
