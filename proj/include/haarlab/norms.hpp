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

#ifndef HAARLAB_NORMS_HPP_
#define HAARLAB_NORMS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "haarlab/dyadic.hpp"
#include "haarlab/grid.hpp"
#include "haarlab/kernels.hpp"

namespace haarlab {

struct NormReport {
  std::string kind;  // "B" or "F"
  double value = 0.0;
  // 2^{ks} ||L_k f||_{L^p} for k = 0..K.
  std::vector<double> per_level;
  SmoothnessParams params;
  int K = 0;
};

NormReport BesovNorm(const GridField &f, const SmoothnessParams &prm, const KernelBank &bank);
NormReport TlNorm(const GridField &f, const SmoothnessParams &prm, const KernelBank &bank);
// Several fine exponents from one pass over the levels.
std::vector<NormReport> TlNormMulti(const GridField &f, double s, double p, const std::vector<double> &qs, int K,
                                    const KernelBank &bank);

struct CubeFunctionalResult {
  cplx value;
  std::vector<cplx> increments;  // int_I L_j Lambda_j f
  std::vector<cplx> partial;     // running sums
};
CubeFunctionalResult CubeFunctional(const GridField &f, const DyadicCube &I, const KernelBank &bank, int J_top);

void WriteNormReportCsv(std::ostream &os, const NormReport &r);

// Quasi-norm of a sample vector (Riemann sum, max for p = inf).
double LpNorm(const std::vector<double> &v, double p, double cell);
double LqSequence(const std::vector<double> &v, double q);

}  // namespace haarlab

#endif  // HAARLAB_NORMS_HPP_
