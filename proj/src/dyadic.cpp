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

#include "haarlab/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "haarlab/grid.hpp"

namespace haarlab {

int64_t FloorDiv(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

double DyadicCube::side() const { return std::ldexp(1.0, -level); }

double DyadicCube::lower(int i) const { return static_cast<double>(nu[i]) * side(); }

bool DyadicCube::contains(const double *x) const {
  for (int i = 0; i < dim(); ++i) {
    if (x[i] < lower(i) || x[i] >= upper(i)) return false;
  }
  return true;
}

bool DyadicCube::operator<(const DyadicCube &o) const {
  if (level != o.level) return level < o.level;
  return nu < o.nu;
}

std::string DyadicCube::ToString() const {
  std::ostringstream os;
  os << "D" << level << "(";
  for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << nu[i];
  os << ")";
  return os.str();
}

std::vector<DyadicCube> Children(const DyadicCube &cube) {
  if (cube.level < 0) throw HaarlabError(ErrorKind::kValidation, "children of level < 0");
  const int d = cube.dim();
  std::vector<DyadicCube> out;
  out.reserve(size_t{1} << d);
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::vector<int64_t> nu(d);
    // First coordinate varies slowest: lexicographic order.
    for (int i = 0; i < d; ++i) nu[i] = 2 * cube.nu[i] + ((mask >> (d - 1 - i)) & 1);
    out.emplace_back(cube.level + 1, std::move(nu));
  }
  return out;
}

DyadicCube Parent(const DyadicCube &cube) {
  std::vector<int64_t> nu(cube.nu.size());
  for (size_t i = 0; i < nu.size(); ++i) nu[i] = FloorDiv(cube.nu[i], 2);
  return DyadicCube(cube.level - 1, std::move(nu));
}

DyadicCube OmegaChild(const DyadicCube &cube) {
  if (cube.level < 0) throw HaarlabError(ErrorKind::kValidation, "omega of level < 0");
  std::vector<int64_t> nu(cube.nu.size());
  // The parent's center sits on the upper face when nu_i is even, lower face otherwise.
  for (size_t i = 0; i < nu.size(); ++i) {
    const bool even = FloorDiv(cube.nu[i], 2) * 2 == cube.nu[i];
    nu[i] = 2 * cube.nu[i] + (even ? 1 : 0);
  }
  return DyadicCube(cube.level + 1, std::move(nu));
}

std::vector<DyadicCube> BoundaryShell(const DyadicCube &cube, int ell) {
  if (ell <= cube.level) throw HaarlabError(ErrorKind::kValidation, "shell level must exceed cube level");
  const int d = cube.dim();
  const int64_t scale = int64_t{1} << (ell - cube.level);
  std::vector<int64_t> a(d), b(d);
  for (int i = 0; i < d; ++i) {
    a[i] = cube.nu[i] * scale;
    b[i] = a[i] + scale;
  }
  std::vector<DyadicCube> out;
  std::vector<int64_t> mu(d);
  for (int i = 0; i < d; ++i) mu[i] = a[i] - 1;
  while (true) {
    bool on_face = false;
    for (int i = 0; i < d; ++i) on_face = on_face || mu[i] <= a[i] || mu[i] + 1 >= b[i];
    if (on_face) out.emplace_back(ell, mu);
    int i = d - 1;
    while (i >= 0 && ++mu[i] > b[i]) {
      mu[i] = a[i] - 1;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

std::vector<DyadicCube> NeighborCubes(const DyadicCube &cube) {
  const int d = cube.dim();
  std::vector<DyadicCube> out;
  std::vector<int64_t> off(d, -1);
  while (true) {
    std::vector<int64_t> nu(d);
    for (int i = 0; i < d; ++i) nu[i] = cube.nu[i] + off[i];
    out.emplace_back(cube.level, std::move(nu));
    int i = d - 1;
    while (i >= 0 && ++off[i] > 1) {
      off[i] = -1;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

double DistToBoundary(const DyadicCube &cube, const double *x) {
  if (cube.contains(x)) {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cube.dim(); ++i)
      m = std::min({m, x[i] - cube.lower(i), cube.upper(i) - x[i]});
    return m;
  }
  double m = 0.0;
  for (int i = 0; i < cube.dim(); ++i) {
    const double lo = cube.lower(i), hi = cube.upper(i);
    m = std::max(m, x[i] < lo ? lo - x[i] : (x[i] > hi ? x[i] - hi : 0.0));
  }
  return m;
}

double DistToLattice(double t, int N) {
  const double s = std::ldexp(t, N);
  const double r = s - std::floor(s);
  return std::ldexp(std::min(r, 1.0 - r), -N);
}

bool InUSet(int N, int k, const double *x, int d) {
  if (k <= N || N < 0) throw HaarlabError(ErrorKind::kValidation, "InUSet requires k > N >= 0");
  const double r = std::ldexp(1.0, -k - 1);
  for (int i = 0; i < d; ++i)
    if (DistToLattice(x[i], N) <= r) return true;
  return false;
}

}  // namespace haarlab
