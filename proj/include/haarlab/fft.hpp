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

#ifndef HAARLAB_FFT_HPP_
#define HAARLAB_FFT_HPP_

#include <array>
#include <vector>

#include "haarlab/grid.hpp"

namespace haarlab {

// In-place d-dimensional DFT on the grid layout. Plans are cached and the
// cache is guarded; execution is reentrant.
void FftForward(std::vector<cplx> *data, const GridSpec &spec);
// Inverse transform including the 1/size normalization.
void FftInverse(std::vector<cplx> *data, const GridSpec &spec);
// Forward DFT of a 1-D array of length n.
void Fft1d(std::vector<cplx> *data);

// Multiplies a spectrum by fn(xi), xi the physical frequency vector.
template <typename Fn>
void ApplyMultiplier(std::vector<cplx> *spectrum, const GridSpec &spec, Fn &&fn) {
  const int64_t n = spec.n_axis();
  const int64_t total = spec.size();
#pragma omp parallel
  {
    std::array<double, 8> xi{};
    std::array<int64_t, 8> idx{};
#pragma omp for schedule(static)
    for (int64_t f = 0; f < total; ++f) {
      int64_t r = f;
      for (int i = spec.d - 1; i >= 0; --i) {
        idx[i] = r % n;
        r /= n;
        xi[i] = spec.freq(idx[i]);
      }
      (*spectrum)[f] *= fn(xi.data(), idx.data());
    }
  }
}

}  // namespace haarlab

#endif  // HAARLAB_FFT_HPP_
