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
#include <sstream>

#include <gtest/gtest.h>

#include "haarlab/examples.hpp"
#include "haarlab/norms.hpp"

namespace haarlab {
namespace {

class NormTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    spec_ = new GridSpec{1, 10, 1};
    bank_ = new KernelBank(KernelBank::Build(KernelOptions{}, *spec_));
  }
  static void TearDownTestSuite() {
    delete bank_;
    delete spec_;
  }
  static GridField Bump(double c, double r) {
    GridField f = SampleField(*spec_, [&](const double *x) {
      const double t = (x[0] - c) / r;
      return cplx(std::fabs(t) < 1 ? std::pow(1 - t * t, 6) : 0.0, 0.0);
    });
    f.compact = true;
    return f;
  }
  static GridSpec *spec_;
  static KernelBank *bank_;
};
GridSpec *NormTest::spec_ = nullptr;
KernelBank *NormTest::bank_ = nullptr;

std::vector<std::vector<double>> Levels(const GridField &f, double s, int K, const KernelBank &bank) {
  std::vector<std::vector<double>> a;
  for (int k = 0; k <= K; ++k) {
    GridField l = LocalMean(f, k, bank);
    std::vector<double> v;
    for (const auto &z : l.values) v.push_back(std::pow(2.0, k * s) * std::abs(z));
    a.push_back(v);
  }
  return a;
}

TEST_F(NormTest, TriebelAgainstDirectSum) {
  GridField f = Bump(0.1, 0.3);
  SmoothnessParams prm;
  prm.s = 0.7;
  prm.p = 1.3;
  prm.q = 2.5;
  prm.K = 7;
  auto a = Levels(f, prm.s, prm.K, *bank_);
  double sum = 0.0;
  for (size_t x = 0; x < a[0].size(); ++x) {
    double inner = 0.0;
    for (const auto &lvl : a) inner += std::pow(lvl[x], prm.q);
    sum += std::pow(inner, prm.p / prm.q);
  }
  const double want = std::pow(sum * spec_->h(), 1.0 / prm.p);
  EXPECT_NEAR(TlNorm(f, prm, *bank_).value / want, 1.0, 1e-12);
  double bes = 0.0;
  for (const auto &lvl : a) {
    double lp = 0.0;
    for (double v : lvl) lp += std::pow(v, prm.p);
    bes += std::pow(std::pow(lp * spec_->h(), 1.0 / prm.p), prm.q);
  }
  EXPECT_NEAR(BesovNorm(f, prm, *bank_).value / std::pow(bes, 1.0 / prm.q), 1.0, 1e-12);
}

TEST_F(NormTest, EqualIndicesAgree) {
  GridField f = Bump(-0.2, 0.25);
  for (double p : {0.8, 1.0, 2.0, 3.5}) {
    SmoothnessParams prm;
    prm.s = 0.4;
    prm.p = p;
    prm.q = p;
    prm.K = 8;
    EXPECT_NEAR(TlNorm(f, prm, *bank_).value / BesovNorm(f, prm, *bank_).value, 1.0, 1e-12) << p;
  }
}

TEST_F(NormTest, ZeroAndHomogeneity) {
  SmoothnessParams prm;
  prm.s = 1.0;
  prm.p = 0.8;
  prm.q = 1.0;
  GridField zero(*spec_);
  zero.compact = true;
  EXPECT_EQ(TlNorm(zero, prm, *bank_).value, 0.0);
  EXPECT_EQ(BesovNorm(zero, prm, *bank_).value, 0.0);
  GridField f = Bump(0.3, 0.2);
  const double base = TlNorm(f, prm, *bank_).value;
  GridField g = cplx(-3.5, 0.0) * f;
  EXPECT_NEAR(TlNorm(g, prm, *bank_).value / base, 3.5, 1e-10);
  const auto multi = TlNormMulti(f, prm.s, prm.p, {1.0, 2.0, HUGE_VAL}, prm.K, *bank_);
  EXPECT_NEAR(multi[0].value / base, 1.0, 1e-14);
  EXPECT_GE(multi[0].value, multi[1].value);
  EXPECT_GE(multi[1].value, multi[2].value);
}

TEST_F(NormTest, SupremumCubeForm) {
  GridField f = Bump(0.0, 0.3);
  const double s = 0.0, q = 2.0;
  const int K = 6;
  auto a = Levels(f, s, K, *bank_);
  const GridSpec &g = *spec_;
  double best = 0.0;
  for (int n = 0; n <= K; ++n) {
    const int64_t L = int64_t{1} << (g.J - n);
    for (int64_t c0 = 0; c0 < g.n_axis(); c0 += L) {
      double acc = 0.0;
      for (int64_t x = c0; x < c0 + L; ++x)
        for (int k = n; k <= K; ++k) acc += std::pow(a[k][x], q);
      best = std::max(best, acc / L);
    }
  }
  SmoothnessParams prm;
  prm.s = s;
  prm.p = HUGE_VAL;
  prm.q = q;
  prm.K = K;
  EXPECT_NEAR(TlNorm(f, prm, *bank_).value / std::sqrt(best), 1.0, 1e-12);
  prm.q = HUGE_VAL;
  double sup = 0.0;
  for (const auto &lvl : a)
    for (double v : lvl) sup = std::max(sup, v);
  EXPECT_NEAR(TlNorm(f, prm, *bank_).value / sup, 1.0, 1e-12);
}

TEST_F(NormTest, MarginAndLevels) {
  SmoothnessParams prm;
  prm.K = spec_->J - 1;
  EXPECT_THROW(TlNorm(Bump(0.0, 0.2), prm, *bank_), HaarlabError);
  prm.K = 4;
  EXPECT_THROW(TlNorm(Bump(0.0, 0.8), prm, *bank_), HaarlabError);
  prm.p = -1;
  EXPECT_THROW(prm.Validate(1), HaarlabError);
  prm.p = 0.5;
  EXPECT_THROW(prm.Validate(1), HaarlabError);
}

TEST_F(NormTest, CubeFunctionalTwoDimensions) {
  GridSpec s{2, 8, 1};
  KernelBank bank = KernelBank::Build(KernelOptions{}, s);
  auto prim = [](double t) {
    t = std::fmax(-1.0, std::fmin(1.0, t));
    return t - 2 * std::pow(t, 3) + 3 * std::pow(t, 5) - 20.0 / 7.0 * std::pow(t, 7) + 15.0 / 9.0 * std::pow(t, 9) -
           6.0 / 11.0 * std::pow(t, 11) + std::pow(t, 13) / 13.0;
  };
  // (1 - t^2)^6 expands to 1 - 6t^2 + 15t^4 - 20t^6 + 15t^8 - 6t^10 + t^12.
  auto exact1d = [&](double c, double r, double a, double b) { return r * (prim((b - c) / r) - prim((a - c) / r)); };
  const double c0 = 0.4, c1 = 0.6, r = 0.35;
  GridField f = SampleField(s, [&](const double *x) {
    double v = 1.0;
    const double cs[2] = {c0, c1};
    for (int i = 0; i < 2; ++i) {
      const double t = (x[i] - cs[i]) / r;
      v *= std::fabs(t) < 1 ? std::pow(1 - t * t, 6) : 0.0;
    }
    return cplx(v, 0.0);
  });
  f.compact = true;
  const DyadicCube I(1, {1, 1});
  const double exact = exact1d(c0, r, 0.5, 1.0) * exact1d(c1, r, 0.5, 1.0);
  auto res = CubeFunctional(f, I, bank, s.J - 2);
  // The grid holds cell samples, so compare with their sum and, up to O(h^2), with the integral.
  double cells = 0.0;
  std::vector<int64_t> idx(2);
  for (int64_t i = 0; i < f.size(); ++i) {
    Unravel(i, s, idx.data());
    const double x[2] = {s.coord(idx[0]), s.coord(idx[1])};
    if (I.contains(x)) cells += f[i].real() * s.cell_volume();
  }
  EXPECT_NEAR(res.value.real() / cells, 1.0, 1e-6);
  EXPECT_NEAR(res.value.real() / exact, 1.0, 1e-3);
  EXPECT_EQ(res.partial.size(), static_cast<size_t>(s.J - 1));
  EXPECT_THROW(CubeFunctional(f, I, bank, s.J - 1), HaarlabError);
}

TEST(NormHelpers, Sequences) {
  EXPECT_NEAR(LqSequence({3.0, 4.0}, 2.0), 5.0, 1e-15);
  EXPECT_EQ(LqSequence({3.0, 4.0}, HUGE_VAL), 4.0);
  EXPECT_NEAR(LpNorm({1.0, 1.0, 1.0, 1.0}, 0.5, 0.25), 1.0, 1e-15);
  std::ostringstream os;
  NormReport r;
  r.kind = "F";
  r.per_level = {1.0, 2.0};
  WriteNormReportCsv(os, r);
  EXPECT_NE(os.str().find("k,level_term"), std::string::npos);
}

}  // namespace
}  // namespace haarlab
