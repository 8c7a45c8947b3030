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

#ifndef SPATIALDEP_TENSOR_HPP_
#define SPATIALDEP_TENSOR_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spatialdep {

// All trainable tensors are dense double matrices; bias vectors are 1 x d.
using Mat = Eigen::MatrixXd;

struct TensorRef {
  std::string name;
  Mat* value;
};

using TensorList = std::vector<TensorRef>;

// Gaussian init with std = scale / sqrt(fan_in).
Mat RandomMatrix(Eigen::Index rows, Eigen::Index cols, double scale, std::mt19937_64& rng);

// Zero every tensor in the list.
void ZeroTensors(const TensorList& tensors);

// Sum of squared entries over the list.
double SquaredNorm(const TensorList& tensors);

// Throws std::invalid_argument if two lists disagree on names or shapes.
void CheckSameLayout(const TensorList& a, const TensorList& b);

bool AllFinite(const TensorList& tensors);

}  // namespace spatialdep

#endif  // SPATIALDEP_TENSOR_HPP_
