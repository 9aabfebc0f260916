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

#include "haarlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace haarlab {

double LpNorm(const std::vector<double> &v, double p, double cell) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  }
  double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static)
  for (size_t i = 0; i < v.size(); ++i) s += std::pow(v[i], p);
  return std::pow(s * cell, 1.0 / p);
}

double LqSequence(const std::vector<double> &v, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(x, q);
  return std::pow(s, 1.0 / q);
}

namespace {

void CheckK(const SmoothnessParams &prm, const GridSpec &spec) {
  if (prm.K > spec.J - 2) throw HaarlabError(ErrorKind::kResolutionTooCoarse, "K must be <= J-2");
  if (prm.K < 0) throw HaarlabError(ErrorKind::kValidation, "K must be >= 0");
}

void CheckMargin(const GridField &f, const KernelBank &bank) {
  if (!f.compact) return;
  const double margin = f.support_margin();
  if (margin < 0.5 * std::max(1.0, bank.width()))
    throw HaarlabError(ErrorKind::kMarginViolation, "field support leaves no periodic gap of width 1");
}

std::vector<double> LevelMagnitude(const Spectrum &sp, int k, double s, const KernelBank &bank) {
  GridField lk = LocalMean(sp, k, bank);
  const double w = std::pow(2.0, k * s);
  std::vector<double> a(static_cast<size_t>(lk.size()));
  for (int64_t i = 0; i < lk.size(); ++i) a[i] = w * std::abs(lk[i]);
  return a;
}

// Maximum over level-n cubes of the mean of t.
double MaxCubeMean(const std::vector<double> &t, const GridSpec &s, int n) {
  const int64_t nb = static_cast<int64_t>(s.B) << (n + 1);
  const int64_t na = s.n_axis();
  const int64_t L = na / nb;
  int64_t blocks = 1, cells = 1;
  for (int i = 0; i < s.d; ++i) {
    blocks *= nb;
    cells *= L;
  }
  std::vector<double> sums(static_cast<size_t>(blocks), 0.0);
  for (int64_t f = 0; f < static_cast<int64_t>(t.size()); ++f) {
    int64_t r = f, b = 0, mul = 1;
    for (int i = s.d - 1; i >= 0; --i) {
      b += ((r % na) / L) * mul;
      r /= na;
      mul *= nb;
    }
    sums[b] += t[f];
  }
  double m = 0.0;
  for (double v : sums) m = std::max(m, v / static_cast<double>(cells));
  return m;
}

}  // namespace

NormReport BesovNorm(const GridField &f, const SmoothnessParams &prm, const KernelBank &bank) {
  CheckK(prm, f.spec);
  CheckMargin(f, bank);
  Spectrum sp = ToSpectrum(f);
  NormReport r;
  r.kind = "B";
  r.params = prm;
  r.K = prm.K;
  for (int k = 0; k <= prm.K; ++k)
    r.per_level.push_back(LpNorm(LevelMagnitude(sp, k, prm.s, bank), prm.p, f.spec.cell_volume()));
  r.value = LqSequence(r.per_level, prm.q);
  return r;
}

std::vector<NormReport> TlNormMulti(const GridField &f, double s, double p, const std::vector<double> &qs, int K,
                                    const KernelBank &bank) {
  SmoothnessParams base;
  base.s = s;
  base.p = p;
  base.K = K;
  CheckK(base, f.spec);
  CheckMargin(f, bank);
  Spectrum sp = ToSpectrum(f);
  const double cell = f.spec.cell_volume();
  const size_t n = static_cast<size_t>(f.size());
  std::vector<NormReport> out(qs.size());
  for (size_t i = 0; i < qs.size(); ++i) {
    out[i].kind = "F";
    out[i].params = base;
    out[i].params.q = qs[i];
    out[i].K = K;
    out[i].per_level.assign(K + 1, 0.0);
  }
  if (std::isinf(p)) {
    // Cube form: sup over n, I in D_n of (|I|^{-1} int_I sum_{k>=n} a_k^q)^{1/q}.
    std::vector<std::vector<double>> tails(qs.size(), std::vector<double>(n, 0.0));
    std::vector<double> best(qs.size(), 0.0);
    for (int k = K; k >= 0; --k) {
      std::vector<double> a = LevelMagnitude(sp, k, s, bank);
      for (size_t i = 0; i < qs.size(); ++i) {
        out[i].per_level[k] = LpNorm(a, p, cell);
        if (std::isinf(qs[i])) continue;
        auto &t = tails[i];
        const double q = qs[i];
#pragma omp parallel for schedule(static)
        for (size_t x = 0; x < n; ++x) t[x] += std::pow(a[x], q);
        best[i] = std::max(best[i], MaxCubeMean(t, f.spec, k));
      }
    }
    for (size_t i = 0; i < qs.size(); ++i) {
      if (std::isinf(qs[i])) {
        // F^s_{inf,inf} is B^s_{inf,inf}.
        out[i].kind = "B";
        out[i].value = LqSequence(out[i].per_level, qs[i]);
      } else {
        out[i].value = std::pow(best[i], 1.0 / qs[i]);
      }
    }
    return out;
  }
  std::vector<std::vector<double>> acc(qs.size(), std::vector<double>(n, 0.0));
  for (int k = 0; k <= K; ++k) {
    std::vector<double> a = LevelMagnitude(sp, k, s, bank);
    const double lvl = LpNorm(a, p, cell);
    for (size_t i = 0; i < qs.size(); ++i) {
      out[i].per_level[k] = lvl;
      auto &t = acc[i];
      const double q = qs[i];
      if (std::isinf(q)) {
#pragma omp parallel for schedule(static)
        for (size_t x = 0; x < n; ++x) t[x] = std::max(t[x], a[x]);
      } else {
#pragma omp parallel for schedule(static)
        for (size_t x = 0; x < n; ++x) t[x] += std::pow(a[x], q);
      }
    }
  }
  for (size_t i = 0; i < qs.size(); ++i) {
    const double q = qs[i];
    auto &t = acc[i];
    if (!std::isinf(q)) {
      const double e = p / q;
      double sum = 0.0;
#pragma omp parallel for reduction(+ : sum) schedule(static)
      for (size_t x = 0; x < n; ++x) sum += std::pow(t[x], e);
      out[i].value = std::pow(sum * cell, 1.0 / p);
    } else {
      out[i].value = LpNorm(t, p, cell);
    }
  }
  return out;
}

NormReport TlNorm(const GridField &f, const SmoothnessParams &prm, const KernelBank &bank) {
  if (std::isinf(prm.p) && std::isinf(prm.q)) {
    NormReport r = BesovNorm(f, prm, bank);
    return r;
  }
  NormReport r = TlNormMulti(f, prm.s, prm.p, {prm.q}, prm.K, bank)[0];
  r.params = prm;
  return r;
}

CubeFunctionalResult CubeFunctional(const GridField &f, const DyadicCube &I, const KernelBank &bank, int J_top) {
  const GridSpec &s = f.spec;
  if (J_top < 0 || J_top > s.J - 2) throw HaarlabError(ErrorKind::kResolutionTooCoarse, "J_top must be <= J-2");
  if (I.level > s.J || I.dim() != s.d) throw HaarlabError(ErrorKind::kValidation, "cube not resolved by grid");
  for (int i = 0; i < s.d; ++i)
    if (I.lower(i) < -s.B || I.upper(i) > s.B) throw HaarlabError(ErrorKind::kValidation, "cube outside box");
  Spectrum sp = ToSpectrum(f);
  // Grid cells covered by I.
  const int64_t L = int64_t{1} << (s.J - I.level);
  std::vector<int64_t> base(s.d);
  for (int i = 0; i < s.d; ++i) base[i] = s.axis_index(I.lower(i));
  int64_t cells = 1;
  for (int i = 0; i < s.d; ++i) cells *= L;
  CubeFunctionalResult res;
  cplx run(0.0, 0.0);
  std::vector<int64_t> idx(s.d);
  for (int j = 0; j <= J_top; ++j) {
    GridField g = ResolutionTerm(sp, j, bank);
    cplx acc(0.0, 0.0);
    for (int64_t c = 0; c < cells; ++c) {
      int64_t r = c;
      for (int i = s.d - 1; i >= 0; --i) {
        idx[i] = base[i] + r % L;
        r /= L;
      }
      acc += g[Ravel(idx.data(), s)];
    }
    acc *= s.cell_volume();
    run += acc;
    res.increments.push_back(acc);
    res.partial.push_back(run);
  }
  res.value = run;
  return res;
}

void WriteNormReportCsv(std::ostream &os, const NormReport &r) {
  os << std::setprecision(17);
  os << "# kind=" << r.kind << " s=" << r.params.s << " p=" << r.params.p << " q=" << r.params.q
     << " A=" << r.params.A << " M=" << r.params.M << " K=" << r.K << " value=" << r.value << "\n";
  os << "k,level_term\n";
  for (size_t k = 0; k < r.per_level.size(); ++k) os << k << "," << r.per_level[k] << "\n";
}

}  // namespace haarlab
