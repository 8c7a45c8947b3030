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

#ifndef SPATIALDEP_GRAPH_HPP_
#define SPATIALDEP_GRAPH_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "spatialdep/tensor.hpp"

namespace spatialdep {

// rel-s orders tokens inside a field and links field nodes to seeds; rel-g
// links a representative field's first token to the first tokens of its group.
enum class Relation { kSerial = 0, kGroup = 1 };

inline constexpr std::array<Relation, 2> kRelations = {Relation::kSerial, Relation::kGroup};

std::string_view RelationName(Relation r);
Relation RelationFromName(std::string_view name);

using BinaryMat = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// (n_field + n_text) x n_text. Rows [0, n_field) are field nodes.
struct EdgeProbabilities {
  Relation relation = Relation::kSerial;
  int n_field = 0;
  Mat p;

  int n_text() const { return static_cast<int>(p.cols()); }
};

struct RelationMatrix {
  Relation relation = Relation::kSerial;
  int n_field = 0;
  BinaryMat m;

  static RelationMatrix Zero(Relation r, int n_field, int n_text);

  int n_text() const { return static_cast<int>(m.cols()); }
  std::size_t EdgeCount() const;

  friend bool operator==(const RelationMatrix& a, const RelationMatrix& b) {
    return a.relation == b.relation && a.n_field == b.n_field && a.m.rows() == b.m.rows() &&
           a.m.cols() == b.m.cols() && a.m == b.m;
  }
};

// Pairwise edge scorer for one relation:
//   h_i = u_i for field rows, W_h v_i + b_h for text rows
//   d_j = W_d v_j + b_d
//   s_c = h_i^T W_c d_j,  p = exp(s_1) / (exp(s_0) + exp(s_1))
struct ScorerParams {
  Mat field_embed;  // n_field x d_score
  Mat head_w, head_b;
  Mat dep_w, dep_b;
  Mat bilinear0, bilinear1;  // d_score x d_score

  static ScorerParams Init(int n_field, int d_model, int d_score, std::uint64_t seed);
  TensorList Tensors(const std::string& prefix);
};

struct ScorerCache {
  Mat heads;  // (n_field + n) x d_score
  Mat deps;   // n x d_score
  Mat probs;
};

EdgeProbabilities ScoreEdges(const Mat& context, const ScorerParams& params, Relation relation);

EdgeProbabilities ScoreEdgesWithCache(const Mat& context, const ScorerParams& params,
                                      Relation relation, ScorerCache& cache);

// d_margin is dLoss/d(s_1 - s_0) per cell. Accumulates parameter gradients and
// returns dLoss/dcontext.
Mat ScorerBackward(const ScorerCache& cache, const Mat& context, const ScorerParams& params,
                   const Mat& d_margin, ScorerParams& grads);

// Threshold rule: field rows keep every p >= p_th (rel-s only); rel-s text
// rows keep only their argmax column (lowest index on ties) when >= p_th;
// rel-g text rows keep every p >= p_th; rel-g field rows stay empty.
RelationMatrix Binarize(const EdgeProbabilities& probs, double p_th = 0.5);

}  // namespace spatialdep

#endif  // SPATIALDEP_GRAPH_HPP_
