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

#ifndef HAARLAB_HAAR_HPP_
#define HAARLAB_HAAR_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "haarlab/grid.hpp"
#include "haarlab/kernels.hpp"

namespace haarlab {

// h^eps_{k,nu}. eps bit (d-1-i) belongs to axis i, so numeric order is lexicographic.
struct HaarIndex {
  int k = 0;
  std::vector<int64_t> nu;
  uint32_t eps = 0;

  int dim() const { return static_cast<int>(nu.size()); }
  int eps_at(int axis) const { return (eps >> (dim() - 1 - axis)) & 1; }
  bool is_scaling() const { return eps == 0; }
  bool operator==(const HaarIndex &o) const { return k == o.k && nu == o.nu && eps == o.eps; }
  bool operator<(const HaarIndex &o) const;
  std::string ToString() const;
};

HaarIndex MakeHaarIndex(int k, std::vector<int64_t> nu, const std::vector<int> &eps);

struct MaskA {
  std::map<std::pair<std::vector<int64_t>, uint32_t>, double> entries;
  double default_value = 0.0;

  double at(const std::vector<int64_t> &nu, uint32_t eps) const;
  void set(const std::vector<int64_t> &nu, uint32_t eps, double a) { entries[{nu, eps}] = a; }
  void Validate() const;
  static MaskA Constant(double a);
};

enum class Flavor { kAdmissible, kStronglyAdmissible, kArbitrary };
const char *FlavorName(Flavor f);

struct Enumeration {
  std::vector<HaarIndex> items;
  int b = 0;  // 0: unverified
  Flavor flavor = Flavor::kArbitrary;
  std::vector<int64_t> markers;  // markers[m] = R(m)
  int d = 1;
  int box_lo = 0, box_hi = 1;  // integer box [lo, hi)^d
};

struct AdmissibilityReport {
  bool ok = false;
  int b = 0;  // least valid b when ok
  int64_t n = -1, n_prime = -1;  // witness positions (0-based): n > n_prime
  std::vector<int64_t> cube;
  int level_gap = 0;
  std::string scope = "unit cubes (or five-fold dilates) containing at least one enumerated item";
};

double HaarEval(const HaarIndex &idx, const double *x);
GridField HaarField(const HaarIndex &idx, const GridSpec &spec);
cplx HaarCoeff(const GridField &f, const HaarIndex &idx);

GridField DyadicAverage(const GridField &f, int N, ExecPolicy policy = ExecPolicy::kParallel);
GridField DyadicComplement(const GridField &f, int N, ExecPolicy policy = ExecPolicy::kParallel);
// Masked level-N layer; N = -1 gives the masked scaling layer (eps = 0, k = 0).
GridField TMask(const GridField &f, int N, const MaskA &a);

AdmissibilityReport CheckAdmissible(const Enumeration &e, bool strong, int b_max = 8);
Enumeration BuildCanonicalEnumeration(int k_max, int box_lo, int box_hi, int d);
GridField PartialSum(const GridField &f, const Enumeration &e, int64_t R);
GridField ProjectionPE(const GridField &f, const std::vector<HaarIndex> &E);
std::vector<int> HaarFrequencyLevels(const std::vector<HaarIndex> &E);
std::vector<double> HaarFrequencies(const std::vector<HaarIndex> &E);

void WriteEnumeration(std::ostream &os, const Enumeration &e);
Enumeration ReadEnumeration(std::istream &is);

}  // namespace haarlab

#endif  // HAARLAB_HAAR_HPP_
