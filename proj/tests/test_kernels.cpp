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
#include <complex>

#include <gtest/gtest.h>

#include "haarlab/examples.hpp"
#include "haarlab/experiments.hpp"
#include "haarlab/kernels.hpp"

namespace haarlab {
namespace {

class KernelTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    spec_ = new GridSpec{1, 10, 1};
    bank_ = new KernelBank(KernelBank::Build(KernelOptions{}, *spec_));
  }
  static void TearDownTestSuite() {
    delete bank_;
    delete spec_;
  }
  static GridSpec *spec_;
  static KernelBank *bank_;
};
GridSpec *KernelTest::spec_ = nullptr;
KernelBank *KernelTest::bank_ = nullptr;

// Composite Simpson rule on [a, b] with n (even) panels.
template <typename F>
double Simpson(F &&f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

TEST_F(KernelTest, MomentsVanishByQuadrature) {
  const KernelBank &b = *bank_;
  const double half = b.width() / 2;
  const double l1 = Simpson([&](double u) { return std::fabs(b.Beta1d(u)); }, -half, half, 20000);
  EXPECT_NEAR(l1 / b.moments().beta_l1, 1.0, 1e-3);
  for (int m = 0; m <= b.M(); ++m) {
    const double mom = Simpson([&](double u) { return std::pow(u, m) * b.Beta1d(u); }, -half, half, 20000);
    EXPECT_LE(std::fabs(mom) / l1, 1e-8) << "moment " << m;
  }
  // The first non-vanishing moment is of order M + 1.
  const int m = b.M() + 1;
  const double top = Simpson([&](double u) { return std::pow(u, m) * b.Beta1d(u); }, -half, half, 20000);
  EXPECT_GT(std::fabs(top) / l1, 1e-6);
}

TEST_F(KernelTest, PrimitiveDerivative) {
  const KernelBank &b = *bank_;
  for (double u : {-0.4, -0.13, 0.0, 0.07, 0.31}) {
    const double e = 1e-5;
    const double fd = (b.Primitive(u + e) - b.Primitive(u - e)) / (2 * e);
    EXPECT_NEAR(fd, b.Beta1d(u), 1e-6 * b.moments().beta_l1) << u;
  }
}

TEST_F(KernelTest, BetaHatMatchesQuadrature) {
  const KernelBank &b = *bank_;
  const double half = b.width() / 2;
  const double l1 = b.moments().beta_l1;
  for (double xi : {0.3, 1.0, 2.5, 4.0, 7.0}) {
    const double re = Simpson([&](double u) { return b.Beta1d(u) * std::cos(2 * M_PI * u * xi); }, -half, half, 20000);
    const double im = Simpson([&](double u) { return b.Beta1d(u) * std::sin(2 * M_PI * u * xi); }, -half, half, 20000);
    EXPECT_NEAR(b.BetaHat(&xi), re, 1e-9 * l1) << xi;
    EXPECT_NEAR(im, 0.0, 1e-9 * l1);
  }
}

TEST_F(KernelTest, FourierFloorOnAnnulus) {
  const KernelBank &b = *bank_;
  const auto &e = b.options().eta0;
  for (double xi = e.inner / 2; xi <= e.outer; xi += 1e-3) EXPECT_GE(std::fabs(b.BetaHat(&xi)), b.delta_min()) << xi;
  EXPECT_GE(b.fourier_floor(), b.delta_min());
}

TEST_F(KernelTest, LocalMeanMatchesDirectConvolution) {
  const GridSpec &s = *spec_;
  GridSpec small{1, 6, 1};
  KernelBank bank = KernelBank::Build(KernelOptions{}, small);
  GridField f = SampleField(small, [](const double *x) { return cplx(std::exp(-20 * x[0] * x[0]) * x[0], 0.0); });
  const double h = small.h();
  for (int k = 1; k <= 3; ++k) {
    GridField got = LocalMean(f, k, bank);
    const double sc = std::ldexp(1.0, k);
    for (int64_t i = 0; i < small.n_axis(); i += 7) {
      const double x = small.coord(i);
      double acc = 0.0;
      for (int64_t c = 0; c < small.n_axis(); ++c) {
        // Cell [a, a + h) with minimal periodic offset.
        double a = small.coord(c) - h / 2 - x;
        a -= 2.0 * small.B * std::round(a / (2.0 * small.B));
        acc += f[c].real() * (bank.Primitive(-sc * a) - bank.Primitive(-sc * (a + h)));
      }
      EXPECT_NEAR(got[i].real(), acc, 1e-9 * bank.moments().beta_l1) << "k=" << k << " i=" << i;
    }
  }
  (void)s;
}

TEST_F(KernelTest, ResolutionOfIdentity) {
  const GridSpec &s = *spec_;
  GridField f = RandomPeriodicBandLimited(s, 6.0, 11);
  const int N = 7;
  GridField acc(s);
  for (int k = 0; k <= N; ++k) acc += ResolutionTerm(f, k, *bank_);
  EXPECT_LE(MaxAbsDiff(acc, PiOp(f, N, *bank_)), 1e-12 * f.max_abs());
  EXPECT_LE(MaxAbsDiff(acc, f), 1e-10 * f.max_abs());
  GridField fused(s);
  for (int k = 0; k <= N; ++k) fused += LocalMean(LambdaOp(f, k, *bank_), k, *bank_);
  EXPECT_LE(MaxAbsDiff(fused, f), 1e-8 * f.max_abs());
}

TEST_F(KernelTest, PiOpIsLowPass) {
  const GridSpec &s = *spec_;
  GridField lo = RandomPeriodicBandLimited(s, 2.0, 3);
  EXPECT_LE(MaxAbsDiff(PiOp(lo, 4, *bank_), lo), 1e-12 * lo.max_abs());
  GridField wave = SampleField(s, [](const double *x) { return cplx(std::cos(2 * M_PI * 100 * x[0]), 0.0); });
  EXPECT_LE(PiOp(wave, 3, *bank_).max_abs(), 1e-12);
}

double PeetreOracle(const GridField &g, double A, int j, int64_t x) {
  const GridSpec &s = g.spec;
  const int64_t n = s.n_axis();
  double best = 0.0;
  for (int64_t y = 0; y < n; ++y) {
    int64_t o = ((y - x) % n + n) % n;
    if (o >= n / 2) o -= n;
    const double dist = std::fabs(static_cast<double>(o)) * s.h();
    best = std::max(best, std::abs(g[y]) * std::pow(1.0 + std::ldexp(dist, j), -A));
  }
  return best;
}

TEST_F(KernelTest, PeetreMaxSerialParallelAndOracle) {
  GridSpec s{1, 6, 1};
  GridField g = RandomPeriodicBandLimited(s, 8.0, 21);
  PeetreOptions ser, par;
  ser.policy = ExecPolicy::kSerial;
  par.policy = ExecPolicy::kParallel;
  auto a = PeetreMax(g, 1.5, 3, ser), b = PeetreMax(g, 1.5, 3, par);
  EXPECT_EQ(a.value.values, b.value.values);
  for (int64_t x = 0; x < s.n_axis(); ++x) EXPECT_NEAR(a.value[x].real(), PeetreOracle(g, 1.5, 3, x), 1e-14);
  PeetreOptions tr;
  tr.r_trunc = 0.25;
  auto c = PeetreMax(g, 1.5, 3, tr);
  EXPECT_GT(c.truncation_bound, 0.0);
  for (int64_t x = 0; x < s.n_axis(); ++x) EXPECT_LE(a.value[x].real() - c.value[x].real(), c.truncation_bound + 1e-15);
}

TEST_F(KernelTest, PeetreMaxDominatesModulus) {
  GridSpec s{2, 4, 1};
  GridField g = RandomPeriodicBandLimited(s, 4.0, 2);
  auto r = PeetreMax(g, 2.5, 2);
  for (int64_t i = 0; i < g.size(); ++i) EXPECT_GE(r.value[i].real(), std::abs(g[i]) - 1e-15);
}

TEST_F(KernelTest, BkjMomentSideDecay) {
  GridSpec s{1, 12, 1};
  KernelBank bank = KernelBank::Build(KernelOptions{}, s);
  std::vector<std::pair<double, double>> pts;
  const int j = 3;
  for (int t = 1; t <= 4; ++t) pts.push_back({double(t), BkjSup(j + t, j, bank)});
  const RateFit fit = FitRate(pts, RateModel::kExponential);
  EXPECT_GE(-fit.exponent, bank.M() - 1.0);
}

TEST_F(KernelTest, MarginAndValidation) {
  const GridSpec &s = *spec_;
  GridField wide = SampleField(s, [](const double *x) { return cplx(std::fabs(x[0]) < 0.9 ? 1.0 : 0.0, 0.0); });
  wide.compact = true;
  EXPECT_THROW(LocalMean(wide, 0, *bank_), HaarlabError);
  GridField narrow = SampleField(s, [](const double *x) { return cplx(std::fabs(x[0]) < 0.2 ? 1.0 : 0.0, 0.0); });
  narrow.compact = true;
  EXPECT_NO_THROW(LocalMean(narrow, 0, *bank_));
  EXPECT_THROW(LocalMean(narrow, s.J, *bank_), HaarlabError);
  GridSpec other{1, 9, 1};
  EXPECT_THROW(LocalMean(GridField(other), 1, *bank_), HaarlabError);
}

TEST_F(KernelTest, HashIsStable) {
  KernelBank again = KernelBank::Build(KernelOptions{}, *spec_);
  EXPECT_EQ(again.Hash(), bank_->Hash());
  KernelOptions o;
  o.M = 7;
  EXPECT_NE(KernelBank::Build(o, *spec_).Hash(), bank_->Hash());
}

}  // namespace
}  // namespace haarlab
