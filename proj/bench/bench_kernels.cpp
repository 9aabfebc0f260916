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


#include <benchmark/benchmark.h>

#include "haarlab/examples.hpp"
#include "haarlab/haar.hpp"
#include "haarlab/kernels.hpp"

namespace haarlab {
namespace {

GridField Field(int J) {
  GridSpec spec{1, J, 1};
  return RandomPeriodicBandLimited(spec, 64.0, 3);
}

ExecPolicy Policy(int64_t v) { return v ? ExecPolicy::kParallel : ExecPolicy::kSerial; }

void BM_PeetreMax(benchmark::State &state) {
  GridField f = Field(static_cast<int>(state.range(0)));
  PeetreOptions opt;
  opt.policy = Policy(state.range(1));
  opt.r_trunc = 0.25;
  for (auto _ : state) benchmark::DoNotOptimize(PeetreMax(f, 1.5, 6, opt).value.values.data());
}
BENCHMARK(BM_PeetreMax)->ArgsProduct({{10, 12}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_DyadicAverage(benchmark::State &state) {
  GridField f = Field(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(DyadicAverage(f, 5, Policy(state.range(1))).values.data());
}
BENCHMARK(BM_DyadicAverage)->ArgsProduct({{14, 18}, {0, 1}})->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace haarlab

BENCHMARK_MAIN();
