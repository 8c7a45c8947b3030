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

#ifndef SPATIALDEP_GEOMETRY_HPP_
#define SPATIALDEP_GEOMETRY_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace spatialdep {

// Document coordinates. y grows downward (image convention).
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// OCR quadrilateral, corners clockwise from top-left.
struct TokenBox {
  std::array<Point, 4> corners{};

  // Axis-aligned box helper.
  static TokenBox FromRect(double left, double top, double right, double bottom);

  Point center() const;

  friend bool operator==(const TokenBox&, const TokenBox&) = default;
};

// Features of token j seen from token i.
struct RelPairFeature {
  double dx = 0.0;
  double dy = 0.0;
  double dist = 0.0;
  double angle = 0.0;  // atan2(dy, dx), radians in [-pi, pi]

  friend bool operator==(const RelPairFeature&, const RelPairFeature&) = default;
};

struct QuantizedRelFeature {
  int qx = 0;
  int qy = 0;
  int qdist = 0;
  int qangle = 0;

  friend bool operator==(const QuantizedRelFeature&, const QuantizedRelFeature&) = default;
};

// Absolute bin sizes in document units.
struct QuantizationConfig {
  double xy_bin = 1.0;
  double dist_bin = 1.0;
  int max_bin = 120;
  int n_angle_bins = 60;

  void Validate() const;
};

// Bin sizes as fractions of the document width; resolved per document.
// This is what a checkpoint stores.
struct QuantizationSpec {
  double xy_bin_fraction = 0.01;
  double dist_bin_fraction = 0.01;
  int max_bin = 120;
  int n_angle_bins = 60;

  QuantizationConfig Resolve(double document_width) const;

  friend bool operator==(const QuantizationSpec&, const QuantizationSpec&) = default;
};

// Row-major n x n grid. Entry (i, j) describes j relative to i.
template <typename T>
class PairGrid {
 public:
  PairGrid() = default;
  explicit PairGrid(std::size_t n) : n_(n), cells_(n * n) {}

  std::size_t size() const { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return cells_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }

  friend bool operator==(const PairGrid&, const PairGrid&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> cells_;
};

// Offset of b with respect to a.
std::pair<double, double> RelativeOffset(const Point& a, const Point& b);

// Offset, distance and angle for every ordered pair; offsets are snapped to a
// 1e-6 grid so that translated copies of a layout give identical features.
PairGrid<RelPairFeature> PairFeatures(std::span<const Point> centers);

QuantizedRelFeature QuantizeFeature(const RelPairFeature& f, const QuantizationConfig& cfg);

PairGrid<QuantizedRelFeature> QuantizeFeatures(const PairGrid<RelPairFeature>& features,
                                               const QuantizationConfig& cfg);

// Transformer-style sinusoidal embedding of an integer bin:
//   out[2m] = sin(k / 10000^(2m/dim)), out[2m+1] = cos(k / 10000^(2m/dim)).
// Throws std::invalid_argument for odd or non-positive dim.
std::vector<double> SinCosEmbed(int k, int dim);

}  // namespace spatialdep

#endif  // SPATIALDEP_GEOMETRY_HPP_
