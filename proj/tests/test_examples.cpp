// Copyright 2026 The HaarLab Authors. All Rights Reserved.
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


#include <cmath>

#include <gtest/gtest.h>

#include "haarlab/bumps.hpp"
#include "haarlab/examples.hpp"

namespace haarlab {
namespace {

TEST(ExamplesTest, ZetaSet) {
  EXPECT_EQ(ZetaSet(8), (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(ZetaSet(10), (std::vector<int>{3, 4, 5}));
  EXPECT_EQ(ZetaSet(12), (std::vector<int>{3, 4, 5, 6}));
  EXPECT_TRUE(ZetaSet(1).empty());
  for (int N = 1; N <= 40; ++N)
    for (int j : ZetaSet(N)) {
      EXPECT_LE(N, 4 * j);
      EXPECT_LE(2 * j, N);
    }
}

TEST(ExamplesTest, SignsAreDeterministicAndBalanced) {
  RademacherSigns a(42), b(42), c(43);
  int sum = 0, diff = 0;
  for (int j = 0; j < 4000; ++j) {
    EXPECT_EQ(a.sign(j), b.sign(j));
    EXPECT_TRUE(a.sign(j) == 1 || a.sign(j) == -1);
    sum += a.sign(j);
    diff += a.sign(j) != c.sign(j);
  }
  EXPECT_LT(std::abs(sum), 250);
  EXPECT_GT(diff, 1500);
}

TEST(ExamplesTest, FractalIntegrals) {
  GridSpec s{1, 14, 1};
  const double h = s.h();
  for (int j = 1; j <= 4; ++j) {
    GridField g = FractalFamily(FractalKind::kF1Gj, j, s);
    double pos = 0.0, all = 0.0;
    for (int64_t i = 0; i < s.n_axis(); ++i) {
      all += g[i].real() * h;
      if (s.coord(i) > 0) pos += g[i].real() * h;
    }
    EXPECT_NEAR(all, 0.0, 1e-8) << j;
    EXPECT_NEAR(pos, 1.0, 1e-6) << j;
  }
  GridField sum = FractalFamily(FractalKind::kF1Gsum, 3, s);
  GridField parts(s);
  for (int j = 1; j <= 3; ++j) parts += FractalFamily(FractalKind::kF1Gj, j, s);
  EXPECT_LE(MaxAbsDiff(sum, parts), 1e-12);
  EXPECT_THROW(FractalFamily(FractalKind::kF1Gj, 11, s), HaarlabError);
  EXPECT_THROW(ParseFractalKind("F3"), HaarlabError);
  EXPECT_EQ(ParseFractalKind("F2_Gsum"), FractalKind::kF2Gsum);
}

TEST(ExamplesTest, TensorFractalSlice) {
  GridSpec s1{1, 7, 1}, s2{2, 7, 1};
  GridField g = FractalFamily(FractalKind::kF1Gj, 2, s1);
  GridField G = FractalFamily(FractalKind::kF2Gj, 2, s2);
  const int64_t n = s2.n_axis();
  const int64_t row = s2.axis_index(0.5);
  for (int64_t i = 0; i < n; ++i) EXPECT_NEAR(G[i * n + row].real(), g[i].real(), 1e-14);
}

TEST(ExamplesTest, UncPacketStructure) {
  GridSpec s{1, 12, 1};
  const int kappa = 2, sigma = 2, N = 4;
  EXPECT_EQ(UncTranslateCount(kappa, N), 4);
  EXPECT_EQ(UncTranslateCount(1, 1), 0);
  GridField y = UncPacket(kappa, sigma, N, s);
  int runs = 0;
  bool in = false;
  for (int64_t i = 0; i < s.n_axis(); ++i) {
    const bool nz = std::abs(y[i]) > 0.0;
    if (nz && !in) ++runs;
    in = nz;
  }
  EXPECT_EQ(runs, 4);
  double peak = 0.0;
  for (double t = -0.5; t <= 0.5; t += 1e-4) peak = std::max(peak, bumps::EvenEta(t));
  // Samples sit at cell midpoints, h/2 away from each translate center.
  EXPECT_NEAR(y.max_abs(), 0.25 * bumps::EvenEta(std::ldexp(s.h() / 2, 10)), 1e-14);
  EXPECT_LE(y.max_abs(), 0.25 * peak);
  EXPECT_THROW(UncPacket(kappa, sigma, N, GridSpec{1, 10, 1}), HaarlabError);
  EXPECT_THROW(UncPacket(kappa, 0, N, s), HaarlabError);
}

TEST(ExamplesTest, DensityFailureOnPlateau) {
  for (int d : {1, 2}) {
    GridSpec s{d, 6, 1};
    GridField f = DensityFailureF(s);
    std::vector<int64_t> idx(d);
    for (int64_t i = 0; i < f.size(); ++i) {
      Unravel(i, s, idx.data());
      bool plateau = true;
      for (int a = 0; a < d; ++a) plateau = plateau && s.coord(idx[a]) >= 0.125 && s.coord(idx[a]) <= 0.875;
      if (plateau) EXPECT_NEAR(f[i].real(), s.coord(idx[0]), 1e-15);
      bool outside = false;
      for (int a = 0; a < d; ++a) outside = outside || s.coord(idx[a]) <= 0.0 || s.coord(idx[a]) >= 1.0;
      if (outside) EXPECT_EQ(f[i].real(), 0.0);
    }
  }
}

TEST(ExamplesTest, PacketsAndDraws) {
  GridSpec s{1, 12, 1};
  KernelBank bank = KernelBank::Build(KernelOptions{}, s);
  GNResult one = CounterexampleGN(8, 4.0, 1, 9, bank);
  EXPECT_EQ(one.best_draw, 0);
  ASSERT_EQ(one.draw_values.size(), 1u);
  EXPECT_NEAR(one.value, LowerBoundFunctional(one.f, 8, 0.8, bank), 1e-9 * one.value);
  GridField scaled = one.f;
  scaled *= std::pow(8.0, -0.25);
  EXPECT_LE(MaxAbsDiff(scaled, one.g), 1e-15);
  GNResult many = CounterexampleGN(8, 4.0, 6, 9, bank);
  EXPECT_GE(many.value, one.value);
  for (double v : many.draw_values) EXPECT_LE(v, many.value);
  // Direct evaluation of the packet sum.
  GridField w = ModulatedPacket({2, 3}, {1, -1}, s);
  for (int64_t i = 0; i < s.n_axis(); i += 37) {
    const double x = s.coord(i);
    const cplx want = bumps::Psi(x) * (0.25 * std::polar(1.0, 2 * M_PI * 4 * x) - 0.125 * std::polar(1.0, 2 * M_PI * 8 * x));
    EXPECT_NEAR(std::abs(w[i] - want), 0.0, 1e-12);
  }
  EXPECT_THROW(ModulatedPacket({10}, {1}, s), HaarlabError);
  PacketLayout c = CompressedLayout(12, 4, 3);
  EXPECT_EQ(c.levels, (std::vector<int>{4, 5, 6, 7}));
  EXPECT_EQ(c.avg_level, 10);
}

TEST(ExamplesTest, TensorPacket) {
  GridSpec s1{1, 8, 1}, s2{2, 8, 1};
  GridField g = ModulatedPacket({2, 3}, {1, 1}, s1);
  GridField t = TensorGN(g, s2);
  const int64_t n = s2.n_axis();
  const int64_t row = s2.axis_index(0.5);
  for (int64_t i = 0; i < n; ++i) EXPECT_EQ(t[i * n + row], g[i]);
  EXPECT_THROW(TensorGN(g, s1), HaarlabError);
}

TEST(ExamplesTest, BandLimitedFields) {
  GridSpec s{1, 9, 1};
  GridField a = RandomPeriodicBandLimited(s, 5.0, 4), b = RandomPeriodicBandLimited(s, 5.0, 4);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NEAR(a.max_abs(), 1.0, 1e-15);
  GridField w = RandomBandLimited(s, 5.0, 4, 0.0, 1.0);
  for (int64_t i = 0; i < s.n_axis(); ++i)
    if (s.coord(i) <= 0.0 || s.coord(i) >= 1.0) EXPECT_EQ(w[i], cplx(0.0, 0.0));
}

}  // namespace
}  // namespace haarlab
