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

#ifndef HAARLAB_DYADIC_HPP_
#define HAARLAB_DYADIC_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace haarlab {

// The half-open cube 2^{-level} (nu + [0,1)^d).
struct DyadicCube {
  int level = 0;
  std::vector<int64_t> nu;

  DyadicCube() = default;
  DyadicCube(int lvl, std::vector<int64_t> index) : level(lvl), nu(std::move(index)) {}

  int dim() const { return static_cast<int>(nu.size()); }
  double side() const;
  double lower(int i) const;
  double upper(int i) const { return lower(i) + side(); }
  bool contains(const double *x) const;
  bool operator==(const DyadicCube &o) const { return level == o.level && nu == o.nu; }
  bool operator<(const DyadicCube &o) const;
  std::string ToString() const;
};

int64_t FloorDiv(int64_t a, int64_t b);

std::vector<DyadicCube> Children(const DyadicCube &cube);
DyadicCube Parent(const DyadicCube &cube);
DyadicCube OmegaChild(const DyadicCube &cube);
// Level-ell cubes whose closure meets the boundary of cube.
std::vector<DyadicCube> BoundaryShell(const DyadicCube &cube, int ell);
// Same-level cubes whose closure meets the closure of cube, cube included.
std::vector<DyadicCube> NeighborCubes(const DyadicCube &cube);
// Sup-metric distance from x to the boundary of the cube.
double DistToBoundary(const DyadicCube &cube, const double *x);
bool InUSet(int N, int k, const double *x, int d);
// Distance from t to the lattice 2^{-N} Z.
double DistToLattice(double t, int N);

}  // namespace haarlab

#endif  // HAARLAB_DYADIC_HPP_
