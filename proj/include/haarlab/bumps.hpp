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

#ifndef HAARLAB_BUMPS_HPP_
#define HAARLAB_BUMPS_HPP_

#include <vector>

namespace haarlab {
namespace bumps {

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double SmoothStep(double t);

// Derivatives 0..n of exp(-a / (1 - t^2)) at t (zero for |t| >= 1).
void ExpBumpDerivs(double t, int n, double a, double *out);
double ExpBump(double t, double a);

// Smooth plateau: support (lo, hi), equal to 1 on [lo + ramp, hi - ramp].
double Plateau(double x, double lo, double hi, double ramp);

// Profile used by the modulated packets: support (1/16, 15/16), 1 on [p, 1-p].
double Psi(double x, double plateau = 0.25);
double PsiPrime(double x, double plateau = 0.25);
// Support (0,1), 1 on [1/8, 7/8].
double Chi(double x);
// Support (1/16, 15/16), 1 on [1/8, 7/8].
double DensityEta(double x);
// Odd, support (-1/2, 1/2), integral over (0, 1/2) equal to 1.
double OddEta(double x);
// Even bump with support (-1/2, 1/2) and unit integral.
double EvenEta(double x);
// One-dimensional partition factor: smooth step up at 0, down at 1, width 0.02.
double Sigma1(double t);

// Composite Gauss-Legendre rule on [lo, hi].
void GaussRule(double lo, double hi, int panels, int order, std::vector<double> *x,
               std::vector<double> *w);

}  // namespace bumps
}  // namespace haarlab

#endif  // HAARLAB_BUMPS_HPP_
