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
#include <map>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "haarlab/haar.hpp"

namespace haarlab {
namespace {

GridField Noise(const GridSpec &s, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  GridField f(s);
  for (auto &v : f.values) v = g(rng);
  return f;
}

// Block means of the level-J samples over level-N cells.
GridField AverageOracle(const GridField &f, int N) {
  const GridSpec &s = f.spec;
  const int64_t r = int64_t{1} << (s.J - N);
  GridField out(s);
  std::vector<int64_t> idx(s.d), blk(s.d);
  std::map<std::vector<int64_t>, std::pair<cplx, int>> sums;
  for (int64_t i = 0; i < f.size(); ++i) {
    Unravel(i, s, idx.data());
    for (int a = 0; a < s.d; ++a) blk[a] = idx[a] / r;
    auto &e = sums[blk];
    e.first += f[i];
    e.second += 1;
  }
  for (int64_t i = 0; i < f.size(); ++i) {
    Unravel(i, s, idx.data());
    for (int a = 0; a < s.d; ++a) blk[a] = idx[a] / r;
    const auto &e = sums[blk];
    out[i] = e.first / double(e.second);
  }
  return out;
}

TEST(HaarTest, CoefficientMatchesMidpointSum) {
  GridSpec s{2, 5, 1};
  GridField f = Noise(s, 1);
  for (const HaarIndex &idx : {MakeHaarIndex(0, {0, -1}, {1, 0}), MakeHaarIndex(2, {3, -2}, {1, 1}),
                               MakeHaarIndex(1, {-2, 1}, {0, 1}), MakeHaarIndex(0, {-1, 0}, {0, 0})}) {
    cplx acc = 0.0;
    double x[2];
    std::vector<int64_t> ii(2);
    for (int64_t i = 0; i < f.size(); ++i) {
      Unravel(i, s, ii.data());
      x[0] = s.coord(ii[0]);
      x[1] = s.coord(ii[1]);
      acc += f[i] * HaarEval(idx, x);
    }
    acc *= s.cell_volume() / std::ldexp(1.0, -2 * idx.k);
    EXPECT_NEAR(std::abs(HaarCoeff(f, idx) - acc), 0.0, 1e-12) << idx.ToString();
  }
}

TEST(HaarTest, Biorthogonal) {
  GridSpec s{1, 6, 1};
  std::vector<HaarIndex> sys = {MakeHaarIndex(0, {0}, {0}), MakeHaarIndex(0, {-1}, {1}), MakeHaarIndex(2, {1}, {1}),
                                MakeHaarIndex(3, {5}, {1}), MakeHaarIndex(3, {-4}, {1})};
  for (const auto &a : sys)
    for (const auto &b : sys) EXPECT_NEAR(std::abs(HaarCoeff(HaarField(a, s), b)), a == b ? 1.0 : 0.0, 1e-14);
}

TEST(HaarTest, AverageAgainstOracleAndPolicies) {
  for (int d : {1, 2}) {
    GridSpec s{d, d == 1 ? 9 : 5, 1};
    GridField f = Noise(s, 2 + d);
    for (int N = 0; N <= s.J; ++N) {
      GridField ser = DyadicAverage(f, N, ExecPolicy::kSerial);
      GridField par = DyadicAverage(f, N, ExecPolicy::kParallel);
      EXPECT_EQ(ser.values, par.values);
      EXPECT_LE(MaxAbsDiff(ser, AverageOracle(f, N)), 1e-13);
      EXPECT_LE(MaxAbsDiff(DyadicComplement(f, N), f - ser), 1e-13);
      EXPECT_LE(MaxAbsDiff(DyadicAverage(ser, N), ser), 1e-13);
    }
    EXPECT_LE(MaxAbsDiff(DyadicAverage(DyadicAverage(f, 4), 2), DyadicAverage(f, 2)), 1e-13);
    EXPECT_LE(MaxAbsDiff(DyadicAverage(DyadicAverage(f, 2), 4), DyadicAverage(f, 2)), 1e-13);
  }
}

TEST(HaarTest, MartingaleDifference) {
  GridSpec s{2, 5, 1};
  GridField f = Noise(s, 9);
  const MaskA one = MaskA::Constant(1.0);
  for (int N = 0; N < s.J; ++N)
    EXPECT_LE(MaxAbsDiff(TMask(f, N, one), DyadicAverage(f, N + 1) - DyadicAverage(f, N)), 1e-12) << N;
  EXPECT_LE(MaxAbsDiff(TMask(f, -1, one), DyadicAverage(f, 0)), 1e-12);
}

TEST(HaarTest, MaskedLayerAgainstSynthesis) {
  GridSpec s{1, 6, 1};
  GridField f = Noise(s, 4);
  MaskA a;
  const int N = 2;
  GridField want(s);
  for (int64_t nu = -4; nu < 4; ++nu) {
    const double w = (nu % 3 == 0) ? -1.0 : 0.5;
    a.set({nu}, 1, w);
    HaarIndex h = MakeHaarIndex(N, {nu}, {1});
    want += cplx(w, 0.0) * (HaarCoeff(f, h) * HaarField(h, s));
  }
  EXPECT_LE(MaxAbsDiff(TMask(f, N, a), want), 1e-12);
  EXPECT_THROW(TMask(f, N, MaskA::Constant(1.5)), HaarlabError);
  try {
    TMask(f, N, MaskA::Constant(-2.0));
  } catch (const HaarlabError &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMaskOutOfRange);
  }
  EXPECT_THROW(TMask(f, s.J, MaskA::Constant(1.0)), HaarlabError);
}

TEST(HaarTest, CanonicalEnumerationPartialSums) {
  for (int d : {1, 2}) {
    GridSpec s{d, d == 1 ? 8 : 5, 1};
    GridField f = Noise(s, 10 + d);
    const int kmax = s.J - 2;
    Enumeration e = BuildCanonicalEnumeration(kmax, -1, 1, d);
    EXPECT_TRUE(CheckAdmissible(e, true).ok);
    EXPECT_LE(MaxAbsDiff(PartialSum(f, e, e.markers[0]), DyadicAverage(f, 0)), 1e-12);
    for (int k = 0; k <= kmax; ++k)
      EXPECT_LE(MaxAbsDiff(PartialSum(f, e, e.markers[k + 1]), DyadicAverage(f, k + 1)), 1e-12) << k;
    EXPECT_EQ(PartialSum(f, e, 0).max_abs(), 0.0);
    EXPECT_THROW(PartialSum(f, e, static_cast<int64_t>(e.items.size()) + 1), HaarlabError);
  }
}

TEST(HaarTest, AdmissibilityWitness) {
  Enumeration e;
  e.d = 1;
  e.items = {MakeHaarIndex(3, {2}, {1}), MakeHaarIndex(0, {0}, {0}), MakeHaarIndex(0, {0}, {1})};
  AdmissibilityReport r = CheckAdmissible(e, false);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.b, 4);
  EXPECT_EQ(r.n_prime, 0);
  EXPECT_EQ(r.level_gap, 3);
  e.items.insert(e.items.begin(), MakeHaarIndex(10, {3}, {1}));
  r = CheckAdmissible(e, false);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.b, 11);
  // A far cube only matters for the dilated check.
  Enumeration g;
  g.d = 1;
  g.items = {MakeHaarIndex(5, {64}, {1}), MakeHaarIndex(0, {0}, {1})};
  EXPECT_EQ(CheckAdmissible(g, false).b, 1);
  EXPECT_EQ(CheckAdmissible(g, true).b, 6);
}

TEST(HaarTest, EnumerationRoundTrip) {
  Enumeration e = BuildCanonicalEnumeration(3, 0, 2, 2);
  std::stringstream ss;
  WriteEnumeration(ss, e);
  Enumeration back = ReadEnumeration(ss);
  EXPECT_EQ(back.items, e.items);
  EXPECT_EQ(back.markers, e.markers);
  EXPECT_EQ(back.b, e.b);
  EXPECT_EQ(back.flavor, e.flavor);
  std::stringstream bad("# haarlab enumeration v1\nd x\n");
  EXPECT_THROW(ReadEnumeration(bad), HaarlabError);
}

TEST(HaarTest, ProjectionAndFrequencies) {
  GridSpec s{1, 7, 1};
  GridField f = Noise(s, 5);
  std::vector<HaarIndex> E = {MakeHaarIndex(1, {0}, {1}), MakeHaarIndex(4, {-3}, {1}), MakeHaarIndex(4, {7}, {1})};
  GridField want(s);
  for (const auto &h : E) want += HaarCoeff(f, h) * HaarField(h, s);
  EXPECT_LE(MaxAbsDiff(ProjectionPE(f, E), want), 1e-12);
  EXPECT_EQ(HaarFrequencyLevels(E), (std::vector<int>{1, 4}));
  EXPECT_EQ(HaarFrequencies(E), (std::vector<double>{2.0, 16.0}));
}

}  // namespace
}  // namespace haarlab
