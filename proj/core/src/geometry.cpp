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

#include "spatialdep/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spatialdep {

TokenBox TokenBox::FromRect(double left, double top, double right, double bottom) {
  return TokenBox{{Point{left, top}, Point{right, top}, Point{right, bottom}, Point{left, bottom}}};
}

Point TokenBox::center() const {
  Point c;
  for (const Point& p : corners) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= 4.0;
  c.y /= 4.0;
  return c;
}

void QuantizationConfig::Validate() const {
  if (!(xy_bin > 0.0) || !(dist_bin > 0.0)) {
    throw std::invalid_argument("quantization bin sizes must be positive");
  }
  if (max_bin < 0 || n_angle_bins < 2) {
    throw std::invalid_argument("quantization ranges out of bounds");
  }
}

QuantizationConfig QuantizationSpec::Resolve(double document_width) const {
  double width = document_width > 0.0 ? document_width : 1.0;
  QuantizationConfig cfg;
  cfg.xy_bin = xy_bin_fraction * width;
  cfg.dist_bin = dist_bin_fraction * width;
  cfg.max_bin = max_bin;
  cfg.n_angle_bins = n_angle_bins;
  cfg.Validate();
  return cfg;
}

std::pair<double, double> RelativeOffset(const Point& a, const Point& b) {
  return {b.x - a.x, b.y - a.y};
}

namespace {

// Sub-pixel noise (e.g. from translating every coordinate) must not move a
// value across a bin edge; adding +0.0 folds -0 into +0 for atan2.
double Snap(double v) { return std::round(v * 1e6) / 1e6 + 0.0; }

}  // namespace

PairGrid<RelPairFeature> PairFeatures(std::span<const Point> centers) {
  const std::size_t n = centers.size();
  PairGrid<RelPairFeature> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      auto [raw_dx, raw_dy] = RelativeOffset(centers[i], centers[j]);
      const double dx = Snap(raw_dx);
      const double dy = Snap(raw_dy);
      grid(i, j) = RelPairFeature{dx, dy, std::hypot(dx, dy), std::atan2(dy, dx)};
    }
  }
  return grid;
}

namespace {

int ClampedRound(double value, int lo, int hi) {
  // Compare in double space first so huge inputs never overflow the cast.
  double r = std::round(value);
  if (r <= lo) return lo;
  if (r >= hi) return hi;
  return static_cast<int>(r);
}

}  // namespace

QuantizedRelFeature QuantizeFeature(const RelPairFeature& f, const QuantizationConfig& cfg) {
  QuantizedRelFeature q;
  q.qx = ClampedRound(f.dx / cfg.xy_bin, -cfg.max_bin, cfg.max_bin);
  q.qy = ClampedRound(f.dy / cfg.xy_bin, -cfg.max_bin, cfg.max_bin);
  q.qdist = ClampedRound(f.dist / cfg.dist_bin, 0, cfg.max_bin);
  // Sectors of width 2pi/n centred on multiples of that width; bin range is
  // (-n/2, n/2] so that the directions pi and -pi share one bin.
  const double sector = 2.0 * std::numbers::pi / cfg.n_angle_bins;
  const int half = cfg.n_angle_bins / 2;
  int qa = ClampedRound(f.angle / sector, -half, half);
  if (qa == -half) qa = half;
  q.qangle = qa;
  return q;
}

PairGrid<QuantizedRelFeature> QuantizeFeatures(const PairGrid<RelPairFeature>& features,
                                               const QuantizationConfig& cfg) {
  cfg.Validate();
  const std::size_t n = features.size();
  PairGrid<QuantizedRelFeature> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = QuantizeFeature(features(i, j), cfg);
  }
  return out;
}

std::vector<double> SinCosEmbed(int k, int dim) {
  if (dim <= 0 || dim % 2 != 0) {
    throw std::invalid_argument("sincos embedding dim must be positive and even, got " +
                                std::to_string(dim));
  }
  std::vector<double> out(static_cast<std::size_t>(dim));
  for (int m = 0; m < dim / 2; ++m) {
    const double freq = std::pow(10000.0, -2.0 * m / dim);
    out[2 * m] = std::sin(k * freq);
    out[2 * m + 1] = std::cos(k * freq);
  }
  return out;
}

}  // namespace spatialdep
