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

#include "spatialdep/tca.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace spatialdep {

namespace {

std::vector<Eigen::Index> TopColumns(const Mat& p, Eigen::Index row, std::size_t k) {
  std::vector<Eigen::Index> cols(static_cast<std::size_t>(p.cols()));
  std::iota(cols.begin(), cols.end(), Eigen::Index{0});
  k = std::min(k, cols.size());
  std::partial_sort(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(k), cols.end(),
                    [&](Eigen::Index a, Eigen::Index b) {
                      if (p(row, a) != p(row, b)) return p(row, a) > p(row, b);
                      return a < b;
                    });
  cols.resize(k);
  return cols;
}

}  // namespace

int CountTailCollisions(const RelationMatrix& matrix) {
  int collisions = 0;
  for (Eigen::Index j = 0; j < matrix.m.cols(); ++j) {
    int incoming = 0;
    for (Eigen::Index i = 0; i < matrix.m.rows(); ++i) incoming += matrix.m(i, j) != 0;
    collisions += incoming >= 2;
  }
  return collisions;
}

TcaResult ResolveCollisions(const EdgeProbabilities& probs, const RelationMatrix& matrix,
                            double p_th, int max_iter) {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (probs.p.rows() != matrix.m.rows() || probs.p.cols() != matrix.m.cols()) {
    throw std::invalid_argument("probability and relation matrices differ in shape");
  }
  const Eigen::Index rows = matrix.m.rows();
  const Eigen::Index cols = matrix.m.cols();

  TcaResult result{matrix, false, 0};
  BinaryMat& m = result.matrix.m;
  // Columns each head has already held or tried.
  std::vector<std::vector<bool>> attempted(static_cast<std::size_t>(rows),
                                           std::vector<bool>(static_cast<std::size_t>(cols)));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) attempted[i][j] = m(i, j) != 0;
  }
  std::vector<std::vector<Eigen::Index>> top3(static_cast<std::size_t>(rows));

  for (int iter = 1; iter <= max_iter; ++iter) {
    result.iterations = iter;
    std::vector<Eigen::Index> losers;
    for (Eigen::Index j = 0; j < cols; ++j) {
      Eigen::Index keep = -1;
      int incoming = 0;
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (!m(i, j)) continue;
        ++incoming;
        if (keep < 0 || probs.p(i, j) > probs.p(keep, j)) keep = i;
      }
      if (incoming < 2) continue;
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (m(i, j) && i != keep) {
          m(i, j) = 0;
          losers.push_back(i);
        }
      }
    }
    if (losers.empty()) {
      result.converged = true;
      return result;
    }
    std::sort(losers.begin(), losers.end());
    losers.erase(std::unique(losers.begin(), losers.end()), losers.end());
    for (Eigen::Index i : losers) {
      auto& top = top3[static_cast<std::size_t>(i)];
      if (top.empty()) top = TopColumns(probs.p, i, 3);
      for (Eigen::Index j : top) {
        if (attempted[i][j]) continue;
        if (probs.p(i, j) < p_th) break;  // later entries are no larger
        attempted[i][j] = true;
        m(i, j) = 1;
        break;
      }
    }
  }
  result.converged = CountTailCollisions(result.matrix) == 0;
  return result;
}

}  // namespace spatialdep
