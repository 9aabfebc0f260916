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

#include "haarlab/examples.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "haarlab/bumps.hpp"
#include "haarlab/fft.hpp"
#include "haarlab/haar.hpp"

namespace haarlab {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int RademacherSigns::sign(int64_t j) const {
  return (SplitMix64(seed_ ^ SplitMix64(static_cast<uint64_t>(j))) >> 63) ? -1 : 1;
}

std::vector<int> ZetaSet(int N) {
  std::vector<int> out;
  for (int j = 0; 4 * j <= 2 * N; ++j)
    if (4 * j >= N) out.push_back(j);
  return out;
}

GridField ModulatedPacket(const std::vector<int> &levels, const std::vector<int> &signs, const GridSpec &spec,
                          double plateau) {
  if (spec.d != 1) throw HaarlabError(ErrorKind::kValidation, "packets are one-dimensional");
  if (signs.size() != levels.size()) throw HaarlabError(ErrorKind::kValidation, "sign count mismatch");
  for (int j : levels)
    if (j > spec.J - 3) throw HaarlabError(ErrorKind::kResolutionTooCoarse, "packet frequency exceeds 2^{J-3}");
  GridField out(spec, true);
  for (int64_t i = 0; i < spec.n_axis(); ++i) {
    const double x = spec.coord(i);
    const double w = bumps::Psi(x, plateau);
    if (w == 0.0) continue;
    cplx acc(0.0, 0.0);
    for (size_t t = 0; t < levels.size(); ++t) {
      const double fj = std::ldexp(1.0, levels[t]);
      // Reduce the phase exactly: 2^j x is a dyadic rational on the grid.
      const double ph = fj * x - std::floor(fj * x);
      acc += std::ldexp(static_cast<double>(signs[t]), -levels[t]) * std::polar(1.0, 2 * M_PI * ph);
    }
    out[i] = w * acc;
  }
  out.compact = true;
  return out;
}

GridField WeierstrassPacket(int N, const RademacherSigns &signs, const GridSpec &spec, double plateau) {
  std::vector<int> levels = ZetaSet(N);
  std::vector<int> s;
  for (int j : levels) s.push_back(signs.sign(j));
  return ModulatedPacket(levels, s, spec, plateau);
}

PacketLayout LiteralLayout(int N) { return PacketLayout{ZetaSet(N), N}; }

PacketLayout CompressedLayout(int N, int lowest, int gap) {
  PacketLayout l;
  const size_t count = ZetaSet(N).size();
  for (size_t i = 0; i < count; ++i) l.levels.push_back(lowest + static_cast<int>(i));
  l.avg_level = l.levels.back() + gap;
  return l;
}

double LowerBoundFunctional(const GridField &f, int n, double p, const KernelBank &bank) {
  GridField e = DyadicAverage(f, n);
  GridField l = LocalMean(e, n, bank);
  std::vector<double> a(static_cast<size_t>(l.size()));
  const double w = std::ldexp(1.0, n);
  for (int64_t i = 0; i < l.size(); ++i) a[i] = w * std::abs(l[i]);
  if (std::isinf(p)) return *std::max_element(a.begin(), a.end());
  double s = 0.0;
  for (double v : a) s += std::pow(v, p);
  return std::pow(s * f.spec.cell_volume(), 1.0 / p);
}

GNResult CounterexampleGN(int N, double q, int n_draws, uint64_t seed, const KernelBank &bank, double p,
                          const PacketLayout *layout, double plateau) {
  if (n_draws < 1) throw HaarlabError(ErrorKind::kValidation, "n_draws must be >= 1");
  const PacketLayout lay = layout ? *layout : LiteralLayout(N);
  const GridSpec &spec = bank.spec();
  if (lay.avg_level > spec.J - 2) throw HaarlabError(ErrorKind::kResolutionTooCoarse, "averaging level exceeds J-2");
  GNResult res;
  res.value = -1.0;
  for (int t = 0; t < n_draws; ++t) {
    RademacherSigns rs(SplitMix64(seed + static_cast<uint64_t>(t)));
    std::vector<int> signs;
    for (size_t i = 0; i < lay.levels.size(); ++i) signs.push_back(rs.sign(static_cast<int64_t>(i)));
    GridField f = ModulatedPacket(lay.levels, signs, spec, plateau);
    const double v = LowerBoundFunctional(f, lay.avg_level, p, bank);
    res.draw_values.push_back(v);
    if (v > res.value) {
      res.value = v;
      res.best_draw = t;
      res.f = std::move(f);
      res.signs = signs;
    }
  }
  const double scale = std::isinf(q) ? 1.0 : std::pow(static_cast<double>(N), -1.0 / q);
  res.g = res.f;
  res.g *= scale;
  return res;
}

GridField TensorGN(const GridField &g, const GridSpec &spec2) {
  if (spec2.d < 2) throw HaarlabError(ErrorKind::kValidation, "tensor extension needs d >= 2");
  if (g.spec.d != 1 || g.spec.J != spec2.J || g.spec.B != spec2.B)
    throw HaarlabError(ErrorKind::kValidation, "tensor extension needs a matching one-dimensional grid");
  const int64_t n = spec2.n_axis();
  std::vector<double> chi(n);
  for (int64_t i = 0; i < n; ++i) chi[i] = bumps::Chi(spec2.coord(i));
  GridField out(spec2, g.is_complex);
  std::vector<int64_t> idx(spec2.d);
  for (int64_t f = 0; f < out.size(); ++f) {
    Unravel(f, spec2, idx.data());
    double w = 1.0;
    for (int i = 1; i < spec2.d; ++i) w *= chi[idx[i]];
    out[f] = w * g[idx[0]];
  }
  out.compact = true;
  return out;
}

GridField DensityFailureF(const GridSpec &spec) {
  GridField out = SampleField(spec, [&](const double *x) {
    double w = x[0];
    for (int i = 0; i < spec.d; ++i) w *= bumps::DensityEta(x[i]);
    return cplx(w, 0.0);
  });
  out.compact = true;
  return out;
}

FractalKind ParseFractalKind(const std::string &s) {
  if (s == "F1_gj") return FractalKind::kF1Gj;
  if (s == "F1_gsum") return FractalKind::kF1Gsum;
  if (s == "F2_Gj") return FractalKind::kF2Gj;
  if (s == "F2_Gsum") return FractalKind::kF2Gsum;
  throw HaarlabError(ErrorKind::kValidation, "unknown fractal kind: " + s);
}

namespace {

std::vector<double> AxisG(const GridSpec &spec, int j) {
  std::vector<double> a(spec.n_axis());
  const double sc = std::ldexp(1.0, j);
  for (int64_t i = 0; i < spec.n_axis(); ++i) a[i] = sc * bumps::OddEta(sc * spec.coord(i));
  return a;
}

}  // namespace

GridField FractalFamily(FractalKind kind, int j_or_N, const GridSpec &spec) {
  const bool sum = kind == FractalKind::kF1Gsum || kind == FractalKind::kF2Gsum;
  const bool tensor = kind == FractalKind::kF2Gj || kind == FractalKind::kF2Gsum;
  if (j_or_N < 1) throw HaarlabError(ErrorKind::kValidation, "fractal level must be >= 1");
  if (j_or_N > spec.J - 4) throw HaarlabError(ErrorKind::kResolutionTooCoarse, "fractal level exceeds J-4");
  const int64_t n = spec.n_axis();
  std::vector<int> js;
  if (sum) {
    for (int j = 1; j <= j_or_N; ++j) js.push_back(j);
  } else {
    js.push_back(j_or_N);
  }
  std::vector<double> chi(n);
  for (int64_t i = 0; i < n; ++i) chi[i] = bumps::Chi(spec.coord(i));
  GridField out(spec);
  std::vector<int64_t> idx(spec.d);
  for (int j : js) {
    std::vector<double> g = AxisG(spec, j);
    for (int64_t f = 0; f < out.size(); ++f) {
      Unravel(f, spec, idx.data());
      double w = g[idx[0]];
      for (int i = 1; i < spec.d; ++i) w *= tensor ? chi[idx[i]] : g[idx[i]];
      out[f] += w;
    }
  }
  out.compact = true;
  return out;
}

int64_t UncTranslateCount(int kappa, int N) {
  const int e = kappa * N - N - 2;
  return e < 0 ? 0 : (int64_t{1} << e);
}

GridField UncPacket(int kappa, int sigma, int N, const GridSpec &spec) {
  const int b = kappa * N;
  if (b + N - sigma > spec.J - 2) throw HaarlabError(ErrorKind::kResolutionTooCoarse, "packet scale exceeds J-2");
  if (sigma < 1 || sigma > N) throw HaarlabError(ErrorKind::kValidation, "sigma must be in [1,N]");
  const int64_t count = UncTranslateCount(kappa, N);
  const double dil = std::ldexp(1.0, b + N - sigma);
  const double spacing = std::ldexp(1.0, N + 2 - b);
  const int64_t n = spec.n_axis();
  std::vector<double> axis(n, 0.0);
  for (int64_t i = 0; i < n; ++i) {
    const double t = spec.coord(i);
    const int64_t nu = static_cast<int64_t>(std::llround(t / spacing));
    for (int64_t v = nu - 1; v <= nu + 1; ++v) {
      if (v < 0 || v >= count) continue;
      axis[i] += bumps::EvenEta(dil * (t - spacing * static_cast<double>(v)));
    }
  }
  const double amp = std::ldexp(1.0, -sigma * spec.d);
  GridField out(spec);
  std::vector<int64_t> idx(spec.d);
  for (int64_t f = 0; f < out.size(); ++f) {
    Unravel(f, spec, idx.data());
    double w = amp;
    for (int i = 0; i < spec.d; ++i) w *= axis[idx[i]];
    out[f] = w;
  }
  out.compact = true;
  return out;
}

GridField RandomPeriodicBandLimited(const GridSpec &spec, double band, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  GridField out(spec);
  for (auto &v : out.values) v = cplx(nd(rng), nd(rng));
  FftForward(&out.values, spec);
  ApplyMultiplier(&out.values, spec, [&](const double *xi, const int64_t *) {
    double r2 = 0.0;
    for (int i = 0; i < spec.d; ++i) r2 += xi[i] * xi[i];
    return std::sqrt(r2) <= band ? 1.0 : 0.0;
  });
  FftInverse(&out.values, spec);
  for (auto &v : out.values) v = cplx(v.real(), 0.0);
  const double m = out.max_abs();
  if (m > 0) out *= 1.0 / m;
  return out;
}

GridField RandomBandLimited(const GridSpec &spec, double band, uint64_t seed, double lo, double hi) {
  GridField out = RandomPeriodicBandLimited(spec, band, seed);
  const double ramp = std::min(0.125, 0.25 * (hi - lo));
  std::vector<int64_t> idx(spec.d);
  for (int64_t f = 0; f < out.size(); ++f) {
    Unravel(f, spec, idx.data());
    double w = 1.0;
    for (int i = 0; i < spec.d; ++i) w *= bumps::Plateau(spec.coord(idx[i]), lo, hi, ramp);
    out[f] *= w;
  }
  out.compact = true;
  return out;
}

}  // namespace haarlab
