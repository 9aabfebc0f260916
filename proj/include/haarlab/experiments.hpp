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

#ifndef HAARLAB_EXPERIMENTS_HPP_
#define HAARLAB_EXPERIMENTS_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "haarlab/examples.hpp"
#include "haarlab/grid.hpp"
#include "haarlab/haar.hpp"
#include "haarlab/kernels.hpp"

namespace haarlab {

enum class Growth { kBounded, kPoly, kExp, kUndefined };
const char *GrowthName(Growth g);

struct RegionVerdict {
  bool in_A = false;
  bool en_uniform = false;
  bool schauder = false;
  bool unconditional = false;
  Growth predicted_growth = Growth::kUndefined;
  // 1/2 - 1/q for kPoly, s - 1 for kExp, 0 for kBounded, NaN otherwise.
  double exponent = 0.0;
  std::string en_rule;  // "i".."v" or empty
};

// Tolerance used for the equalities and strict inequalities of the region tests.
constexpr double kRegionTol = 1e-12;

RegionVerdict Classify(double s, double p, double q, int d);

enum class RateModel { kPower, kExponential };
const char *RateModelName(RateModel m);

struct RateFit {
  std::vector<std::pair<double, double>> samples;
  RateModel model = RateModel::kPower;
  double exponent = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
  bool degenerate = false;  // all values equal
};

// Least squares of log2(value) against log2(N) or N. Needs three positive samples.
RateFit FitRate(const std::vector<std::pair<double, double>> &samples, RateModel model);

// Truncation of the norm sums: K = min(N + delta, J - 2), or a fixed K when fixed_K >= 0.
struct TruncationPolicy {
  int delta = 2;
  int fixed_K = -1;
  int Resolve(int N, const GridSpec &spec) const;
};

struct Probe {
  std::string id;
  std::function<GridField(int N)> make;
};
using Operator = std::function<GridField(const GridField &, int N)>;

Operator IdentityOperator();
Operator AveragingOperator(ExecPolicy policy = ExecPolicy::kParallel);
// T_N[., a] with a fixed mask.
Operator MaskedLevelOperator(MaskA mask);
// S_R with R the first position after level N of the enumeration.
Operator PartialSumOperator(Enumeration e);
Operator ProjectionOperator(std::vector<HaarIndex> E);

struct ProbeOptions {
  uint64_t seed = 1;
  bool include_gn = false;  // adds the randomized packet g_N (d = 1)
  int gn_draws = 16;
};
// The default probe battery on a grid.
std::vector<Probe> StandardProbes(const GridSpec &spec, const KernelBank &bank, const ProbeOptions &opt = {});
// x_1 eta(x) composed with the dilation x -> 2^e x.
GridField DilatedDensity(const GridSpec &spec, int e);
// Cell-constant probes at level N (fixed points of E_N).
std::vector<Probe> CellProbes(const GridSpec &spec);

struct OpNormPoint {
  int N = 0;
  int K = 0;
  double ratio = 0.0;
  std::string probe;
  std::vector<std::pair<std::string, double>> all;
  std::vector<std::string> skipped;  // probe ids that raised errors
};

std::vector<OpNormPoint> OpNormLower(const Operator &op, const std::vector<Probe> &probes, const SmoothnessParams &prm,
                                     const std::vector<int> &Ns, const TruncationPolicy &trunc,
                                     const KernelBank &bank);
// One pass per probe evaluating several fine exponents; result[i] belongs to qs[i].
std::vector<std::vector<OpNormPoint>> OpNormLowerMulti(const Operator &op, const std::vector<Probe> &probes, double s,
                                                       double p, const std::vector<double> &qs,
                                                       const std::vector<int> &Ns, const TruncationPolicy &trunc,
                                                       const KernelBank &bank);

struct ScanTuple {
  double s = 0.0, p = 2.0, q = 2.0;
};
struct ScanRow {
  ScanTuple t;
  RegionVerdict verdict;
  RateFit fit;
  double predicted = 0.0;
  bool agree = false;
  std::string error;
  std::vector<OpNormPoint> points;
};
struct ScanOptions {
  std::vector<int> Ns;
  TruncationPolicy trunc;
  double tol_power = 0.15;
  double tol_exp = 0.1;
  double min_r2 = 0.9;
};
std::vector<ScanRow> RegionScan(const std::vector<ScanTuple> &tuples, const std::vector<Probe> &probes,
                                const ScanOptions &opt, const KernelBank &bank);
void WriteScanCsv(std::ostream &os, const std::vector<ScanRow> &rows);

struct IdentityCheck {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string detail;
};
struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool ok() const;
};
struct IdentityOptions {
  uint64_t seed = 7;
  int n_functions = 10;
  int n_R = 5;
  int k_max = 6;
  // "", "mask", "martingale" or "support": perturbs one ingredient so the named check fails.
  std::string fault;
};
IdentityReport IdentitySuite(const GridSpec &spec, const KernelBank &bank, const IdentityOptions &opt = {});
void WriteIdentityCsv(std::ostream &os, const IdentityReport &r);

// The partition factor sigma(x - nu) on the grid.
GridField PartitionFactor(const GridSpec &spec, const std::vector<int64_t> &nu);

struct NonconvergenceResult {
  std::vector<std::pair<double, double>> series;  // (N, ||E_N f - f||)
  RateFit fit;  // exponential model: log2 value per unit N
  double floor = 0.0;
  double first = 0.0;
  double last = 0.0;
};
NonconvergenceResult NonconvergenceProbe(const GridField &f, const SmoothnessParams &prm, const std::vector<int> &Ns,
                                         const TruncationPolicy &trunc, const KernelBank &bank);

// Growth of ||E_n g_N|| / ||g_N|| for the randomized packets, one grid per N.
struct PacketGrowthOptions {
  double p = 0.8;
  std::vector<double> qs = {HUGE_VAL, 4.0, 2.0};
  int lowest = 4;  // lowest packet frequency level
  int gap = 3;     // averaging level above the highest frequency
  int delta = 3;   // K = averaging level + delta, J = K + 2
  int n_draws = 16;
  uint64_t seed = 1;
  KernelOptions kernel;
};
struct PacketGrowthRow {
  int N = 0, J = 0, n = 0, K = 0;
  double lower_bound = 0.0;
  std::vector<double> ratios;  // per q
};
std::vector<PacketGrowthRow> PacketGrowth(const std::vector<int> &Ns, const PacketGrowthOptions &opt);

}  // namespace haarlab

#endif  // HAARLAB_EXPERIMENTS_HPP_
