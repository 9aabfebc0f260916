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

#ifndef HAARLAB_EXAMPLES_HPP_
#define HAARLAB_EXAMPLES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "haarlab/grid.hpp"
#include "haarlab/kernels.hpp"

namespace haarlab {

// Counter-based signs: sign(j) depends only on (seed, j).
class RademacherSigns {
 public:
  explicit RademacherSigns(uint64_t seed) : seed_(seed) {}
  int sign(int64_t j) const;
  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
};

uint64_t SplitMix64(uint64_t x);

// {j : N/4 <= j <= N/2}.
std::vector<int> ZetaSet(int N);

// sum_j r_j 2^{-j} exp(2 pi i 2^j x) psi(x) over the given frequency levels (d = 1).
GridField ModulatedPacket(const std::vector<int> &levels, const std::vector<int> &signs, const GridSpec &spec,
                          double plateau = 0.25);
GridField WeierstrassPacket(int N, const RademacherSigns &signs, const GridSpec &spec, double plateau = 0.25);

// Frequency layout of a packet and the averaging level used by the lower-bound functional.
struct PacketLayout {
  std::vector<int> levels;
  int avg_level = 0;
};
PacketLayout LiteralLayout(int N);
// Same number of frequencies as ZetaSet(N), placed at consecutive levels from lowest.
PacketLayout CompressedLayout(int N, int lowest, int gap);

struct GNResult {
  GridField g;
  GridField f;
  double value = 0.0;  // lower-bound functional of the kept draw
  int best_draw = 0;
  std::vector<double> draw_values;
  std::vector<int> signs;
};
GNResult CounterexampleGN(int N, double q, int n_draws, uint64_t seed, const KernelBank &bank, double p = 0.8,
                          const PacketLayout *layout = nullptr, double plateau = 0.25);
// ||2^n beta_n * E_n f||_{L^p}.
double LowerBoundFunctional(const GridField &f, int n, double p, const KernelBank &bank);

GridField TensorGN(const GridField &g, const GridSpec &spec2);
GridField DensityFailureF(const GridSpec &spec);

enum class FractalKind { kF1Gj, kF1Gsum, kF2Gj, kF2Gsum };
FractalKind ParseFractalKind(const std::string &s);
GridField FractalFamily(FractalKind kind, int j_or_N, const GridSpec &spec);

// Translate count 2^{b-N-2} with b = kappa N.
int64_t UncTranslateCount(int kappa, int N);
GridField UncPacket(int kappa, int sigma, int N, const GridSpec &spec);

// Random band-limited real field with spectrum inside |xi| <= band, supported via a smooth window in [lo, hi]^d.
GridField RandomBandLimited(const GridSpec &spec, double band, uint64_t seed, double lo = 0.0, double hi = 1.0);
// Random field that is periodic and band-limited (no window).
GridField RandomPeriodicBandLimited(const GridSpec &spec, double band, uint64_t seed);

}  // namespace haarlab

#endif  // HAARLAB_EXAMPLES_HPP_
