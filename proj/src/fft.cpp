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

#include "haarlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace haarlab {
namespace {

std::mutex g_plan_mutex;
std::map<std::tuple<int, int64_t, int>, fftw_plan> g_plans;

fftw_plan GetPlan(int d, int64_t n, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_tuple(d, n, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  std::vector<int> dims(d, static_cast<int>(n));
  int64_t total = 1;
  for (int i = 0; i < d; ++i) total *= n;
  fftw_complex *tmp = fftw_alloc_complex(static_cast<size_t>(total));
  fftw_plan plan = fftw_plan_dft(d, dims.data(), tmp, tmp, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(tmp);
  g_plans.emplace(key, plan);
  return plan;
}

void Execute(std::vector<cplx> *data, int d, int64_t n, int sign) {
  fftw_plan plan = GetPlan(d, n, sign);
  auto *p = reinterpret_cast<fftw_complex *>(data->data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace

void FftForward(std::vector<cplx> *data, const GridSpec &spec) {
  Execute(data, spec.d, spec.n_axis(), FFTW_FORWARD);
}

void FftInverse(std::vector<cplx> *data, const GridSpec &spec) {
  Execute(data, spec.d, spec.n_axis(), FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(spec.size());
  for (auto &v : *data) v *= scale;
}

void Fft1d(std::vector<cplx> *data) {
  Execute(data, 1, static_cast<int64_t>(data->size()), FFTW_FORWARD);
}

}  // namespace haarlab
