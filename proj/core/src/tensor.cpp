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

#include "spatialdep/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace spatialdep {

Mat RandomMatrix(Eigen::Index rows, Eigen::Index cols, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, scale / std::sqrt(static_cast<double>(cols)));
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return m;
}

void ZeroTensors(const TensorList& tensors) {
  for (const auto& t : tensors) t.value->setZero();
}

double SquaredNorm(const TensorList& tensors) {
  double s = 0.0;
  for (const auto& t : tensors) s += t.value->squaredNorm();
  return s;
}

void CheckSameLayout(const TensorList& a, const TensorList& b) {
  if (a.size() != b.size()) throw std::invalid_argument("tensor lists differ in length");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].value->rows() != b[i].value->rows() ||
        a[i].value->cols() != b[i].value->cols()) {
      throw std::invalid_argument("tensor layout mismatch at '" + a[i].name + "'");
    }
  }
}

bool AllFinite(const TensorList& tensors) {
  for (const auto& t : tensors) {
    if (!t.value->allFinite()) return false;
  }
  return true;
}

}  // namespace spatialdep
