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

#include "haarlab/bumps.hpp"

#include <cmath>

namespace haarlab {
namespace bumps {

double SmoothStep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

void ExpBumpDerivs(double t, int n, double a, double *out) {
  for (int i = 0; i <= n; ++i) out[i] = 0.0;
  if (!(std::abs(t) < 1.0)) return;
  double g[32], e[32];
  const double up = 1.0 / (1.0 - t), dn = 1.0 / (1.0 + t);
  double pu = up, pd = dn;
  for (int k = 0; k <= n; ++k) {
    g[k] = -0.5 * a * (pu + ((k & 1) ? -pd : pd));
    pu *= up;
    pd *= dn;
  }
  e[0] = std::exp(g[0]);
  if (e[0] == 0.0) return;
  double fact = 1.0;
  out[0] = e[0];
  for (int m = 1; m <= n; ++m) {
    double s = 0.0;
    for (int k = 1; k <= m; ++k) s += k * g[k] * e[m - k];
    e[m] = s / m;
    fact *= m;
    out[m] = fact * e[m];
  }
}

double ExpBump(double t, double a) {
  if (!(std::abs(t) < 1.0)) return 0.0;
  return std::exp(-a / (1.0 - t * t));
}

double Plateau(double x, double lo, double hi, double ramp) {
  return SmoothStep((x - lo) / ramp) * SmoothStep((hi - x) / ramp);
}

double Psi(double x, double plateau) {
  const double lo = 1.0 / 16.0;
  return Plateau(x, lo, 1.0 - lo, plateau - lo);
}

double PsiPrime(double x, double plateau) {
  const double eps = 1e-6;
  return (Psi(x + eps, plateau) - Psi(x - eps, plateau)) / (2 * eps);
}

double Chi(double x) { return Plateau(x, 0.0, 1.0, 0.125); }

double DensityEta(double x) { return Plateau(x, 1.0 / 16.0, 15.0 / 16.0, 1.0 / 16.0); }

namespace {

double UnitIntegral() {
  static double value = [] {
    std::vector<double> x, w;
    GaussRule(-1.0, 1.0, 8, 24, &x, &w);
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += w[i] * ExpBump(x[i], 1.0);
    return s;
  }();
  return value;
}

}  // namespace

double OddEta(double x) {
  // exp bump on (0,1/2) minus its mirror; the (0,1/2) part integrates to 1.
  const double c = 4.0 / UnitIntegral();
  return c * (ExpBump(4.0 * x - 1.0, 1.0) - ExpBump(4.0 * x + 1.0, 1.0));
}

double EvenEta(double x) { return 2.0 * ExpBump(2.0 * x, 1.0) / UnitIntegral(); }

double Sigma1(double t) {
  auto g = [](double u) { return SmoothStep((u + 0.01) / 0.02); };
  return g(t) - g(t - 1.0);
}

void GaussRule(double lo, double hi, int panels, int order, std::vector<double> *x,
               std::vector<double> *w) {
  // Golub-Welsch free construction: Newton on Legendre polynomials.
  std::vector<double> nodes(order), weights(order);
  for (int i = 0; i < order; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = order * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        nodes[i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        break;
      }
      nodes[i] = z;
      weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
  x->clear();
  w->clear();
  const double step = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * step, half = 0.5 * step;
    for (int i = 0; i < order; ++i) {
      x->push_back(a + half * (1.0 + nodes[i]));
      w->push_back(half * weights[i]);
    }
  }
}

}  // namespace bumps
}  // namespace haarlab
