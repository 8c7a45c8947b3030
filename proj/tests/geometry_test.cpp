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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

namespace spatialdep {
namespace {

TEST(RelativeOffset, Examples) {
  EXPECT_EQ(RelativeOffset({1, 10}, {3, 4}), std::make_pair(2.0, -6.0));
  EXPECT_EQ(RelativeOffset({5, 5}, {5, 5}), std::make_pair(0.0, 0.0));
  EXPECT_EQ(RelativeOffset({0, 0}, {-2, 3}), std::make_pair(-2.0, 3.0));
}

TEST(PairFeatures, SingleTokenIsZero) {
  const std::vector<Point> c{{4, 9}};
  const auto f = PairFeatures(c);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f(0, 0), RelPairFeature{});
}

TEST(PairFeatures, ThreeFourFive) {
  const std::vector<Point> c{{0, 0}, {3, 4}};
  const auto f = PairFeatures(c);
  EXPECT_DOUBLE_EQ(f(0, 1).dist, 5.0);
  EXPECT_DOUBLE_EQ(f(0, 1).angle, std::atan2(4.0, 3.0));
  EXPECT_DOUBLE_EQ(f(0, 1).dx, 3.0);
  EXPECT_DOUBLE_EQ(f(0, 1).dy, 4.0);
}

TEST(PairFeatures, TranslationInvarianceAndAntisymmetry) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-500, 500);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> c(12);
    for (auto& p : c) p = {u(rng), u(rng)};
    const Point shift{u(rng), u(rng)};
    std::vector<Point> moved = c;
    for (auto& p : moved) p = {p.x + shift.x, p.y + shift.y};
    const auto a = PairFeatures(c);
    const auto b = PairFeatures(moved);
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = 0; j < c.size(); ++j) {
        EXPECT_NEAR(a(i, j).dx, b(i, j).dx, 1e-9);
        EXPECT_NEAR(a(i, j).dy, b(i, j).dy, 1e-9);
        EXPECT_NEAR(a(i, j).dist, b(i, j).dist, 1e-9);
        EXPECT_EQ(a(i, j).dx, -a(j, i).dx);
        EXPECT_EQ(a(i, j).dy, -a(j, i).dy);
        EXPECT_EQ(a(i, j).dist, a(j, i).dist);
      }
    }
  }
}

TEST(Quantize, Examples) {
  QuantizationConfig cfg{1.0, 1.0, 50, 60};
  EXPECT_EQ(QuantizeFeature({0, 0, 0, 0}, cfg).qx, 0);
  EXPECT_EQ(QuantizeFeature({0, 0, 0, 0}, QuantizationConfig{7.5, 3.0, 50, 60}).qx, 0);
  EXPECT_EQ(QuantizeFeature({2.6, 0, 0, 0}, cfg).qx, 3);
  EXPECT_EQ(QuantizeFeature({1e6, 0, 0, 0}, cfg).qx, 50);
  EXPECT_EQ(QuantizeFeature({-1e6, -1e6, 1e6, 0}, cfg).qy, -50);
  EXPECT_EQ(QuantizeFeature({0, 0, 1e6, 0}, cfg).qdist, 50);
}

TEST(Quantize, MatchesScalarReference) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-300, 300);
  const QuantizationConfig cfg{4.0, 6.0, 40, 60};
  for (int k = 0; k < 1000; ++k) {
    const double dx = u(rng);
    const double dy = u(rng);
    const RelPairFeature f{dx, dy, std::hypot(dx, dy), std::atan2(dy, dx)};
    const auto q = QuantizeFeature(f, cfg);
    EXPECT_EQ(q.qx, static_cast<int>(std::max(-40.0, std::min(40.0, std::round(dx / 4.0)))));
    EXPECT_EQ(q.qy, static_cast<int>(std::max(-40.0, std::min(40.0, std::round(dy / 4.0)))));
    EXPECT_EQ(q.qdist, static_cast<int>(std::min(40.0, std::round(f.dist / 6.0))));
    EXPECT_GT(q.qangle, -30);
    EXPECT_LE(q.qangle, 30);
  }
}

TEST(Quantize, OppositeDirectionsShareBin) {
  const QuantizationConfig cfg{1.0, 1.0, 50, 60};
  const double pi = std::acos(-1.0);
  EXPECT_EQ(QuantizeFeature({-1, 0, 1, pi}, cfg).qangle,
            QuantizeFeature({-1, -0.0, 1, -pi}, cfg).qangle);
}

TEST(Quantize, RejectsBadConfig) {
  EXPECT_THROW((QuantizationConfig{0.0, 1.0, 10, 60}.Validate()), std::invalid_argument);
  EXPECT_THROW((QuantizationConfig{1.0, -1.0, 10, 60}.Validate()), std::invalid_argument);
}

TEST(SinCos, ZeroAlternates) {
  const auto e = SinCosEmbed(0, 10);
  for (int m = 0; m < 10; ++m) EXPECT_EQ(e[m], m % 2 == 0 ? 0.0 : 1.0);
}

TEST(SinCos, MatchesFormulaAndRange) {
  const auto e = SinCosEmbed(3, 8);
  for (int m = 0; m < 4; ++m) {
    const double freq = 1.0 / std::pow(10000.0, (2.0 * m) / 8.0);
    EXPECT_NEAR(e[2 * m], std::sin(3.0 * freq), 1e-15);
    EXPECT_NEAR(e[2 * m + 1], std::cos(3.0 * freq), 1e-15);
  }
  for (int k = -200; k <= 200; k += 7) {
    for (double v : SinCosEmbed(k, 16)) {
      EXPECT_LE(std::abs(v), 1.0);
    }
  }
}

TEST(SinCos, RejectsOddDim) {
  EXPECT_THROW(SinCosEmbed(1, 7), std::invalid_argument);
  EXPECT_THROW(SinCosEmbed(1, 0), std::invalid_argument);
}

}  // namespace
}  // namespace spatialdep
