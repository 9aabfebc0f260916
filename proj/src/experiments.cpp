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

#include "haarlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "haarlab/bumps.hpp"
#include "haarlab/dyadic.hpp"
#include "haarlab/norms.hpp"

namespace haarlab {

namespace {

bool Lt(double a, double b) { return a < b - kRegionTol; }
bool Le(double a, double b) { return a <= b + kRegionTol; }
bool Eq(double a, double b) { return std::abs(a - b) <= kRegionTol; }
double Inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace

const char *GrowthName(Growth g) {
  switch (g) {
    case Growth::kBounded:
      return "bounded";
    case Growth::kPoly:
      return "poly";
    case Growth::kExp:
      return "exp";
    case Growth::kUndefined:
      return "undefined";
  }
  return "?";
}

RegionVerdict Classify(double s, double p, double q, int d) {
  if (!(p > 0.0) || !(q > 0.0) || d < 1) throw HaarlabError(ErrorKind::kValidation, "classify needs p, q > 0, d >= 1");
  RegionVerdict v;
  const double ip = Inv(p), iq = Inv(q);
  const double dd = d;
  const double crit = dd / (dd + 1.0);
  const bool p_inf = std::isinf(p), q_inf = std::isinf(q);

  v.in_A = (Lt(std::max(dd * ip - dd, ip - 1.0), s) && Lt(s, ip)) || (Eq(s, dd * ip - dd) && Le(p, 1.0)) ||
           (Eq(s, 0.0) && p_inf);

  const bool th3_i = Lt(1.0, p) && Lt(ip - 1.0, s) && Lt(s, ip);
  const bool th3_ii = Le(crit, p) && Lt(p, 1.0) && Eq(s, 1.0) && Le(q, 2.0);
  const bool th3_iii = Lt(crit, p) && Le(p, 1.0) && Lt(dd * (ip - 1.0), s) && Lt(s, 1.0);
  const bool th3_iv = Lt(crit, p) && Le(p, 1.0) && Eq(s, dd * (ip - 1.0));
  const bool th3_v = p_inf && Eq(s, 0.0);
  v.en_uniform = th3_i || th3_ii || th3_iii || th3_iv || th3_v;
  if (th3_i) v.en_rule = "i";
  else if (th3_ii) v.en_rule = "ii";
  else if (th3_iii) v.en_rule = "iii";
  else if (th3_iv) v.en_rule = "iv";
  else if (th3_v) v.en_rule = "v";

  if (!q_inf) {
    const bool b_i = !p_inf && Lt(1.0, p) && Lt(ip - 1.0, s) && Lt(s, ip);
    const bool b_ii = Lt(crit, p) && Le(p, 1.0) && Lt(dd * ip - dd, s) && Lt(s, 1.0);
    const bool b_iii = Lt(crit, p) && Le(p, 1.0) && Eq(s, dd * ip - dd);
    v.schauder = b_i || b_ii || b_iii;
  }

  if (!p_inf && !q_inf) {
    const bool range1 =
        Lt(crit, p) && Lt(std::max(dd * (ip - 1.0), ip - 1.0), s) && Lt(s, std::min(1.0, ip));
    const bool q_range = Lt(std::max(dd * (iq - 1.0), iq - 1.0), s) && Lt(s, iq);
    v.unconditional = range1 && q_range;
  }

  if (!v.in_A) {
    v.predicted_growth = Growth::kUndefined;
    v.exponent = std::numeric_limits<double>::quiet_NaN();
  } else if (Lt(1.0, s) && Lt(s, ip)) {
    v.predicted_growth = Growth::kExp;
    v.exponent = s - 1.0;
  } else if (Eq(s, 1.0) && Lt(2.0, q)) {
    v.predicted_growth = Growth::kPoly;
    v.exponent = 0.5 - iq;
  } else {
    v.predicted_growth = Growth::kBounded;
    v.exponent = 0.0;
  }
  return v;
}

const char *RateModelName(RateModel m) { return m == RateModel::kPower ? "power" : "exponential"; }

RateFit FitRate(const std::vector<std::pair<double, double>> &samples, RateModel model) {
  if (samples.size() < 3) throw HaarlabError(ErrorKind::kValidation, "rate fit needs at least 3 samples");
  RateFit fit;
  fit.samples = samples;
  fit.model = model;
  std::vector<double> x, y;
  for (const auto &[n, v] : samples) {
    if (!(v > 0.0) || !std::isfinite(v)) throw HaarlabError(ErrorKind::kValidation, "rate fit needs positive values");
    if (model == RateModel::kPower && !(n > 0.0))
      throw HaarlabError(ErrorKind::kValidation, "power model needs positive N");
    x.push_back(model == RateModel::kPower ? std::log2(n) : n);
    y.push_back(std::log2(v));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw HaarlabError(ErrorKind::kValidation, "rate fit needs distinct N");
  const double spread = *std::max_element(y.begin(), y.end()) - *std::min_element(y.begin(), y.end());
  if (spread <= 1e-14 * std::max(1.0, std::abs(my))) {
    fit.degenerate = true;
    fit.exponent = 0.0;
    fit.intercept = my;
    fit.r2 = 1.0;
    return fit;
  }
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ss_res = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.exponent * x[i]);
    ss_res += r * r;
  }
  fit.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

int TruncationPolicy::Resolve(int N, const GridSpec &spec) const {
  if (fixed_K >= 0) return std::min(fixed_K, spec.J - 2);
  return std::max(0, std::min(N + delta, spec.J - 2));
}

Operator IdentityOperator() {
  return [](const GridField &f, int) { return f; };
}

Operator AveragingOperator(ExecPolicy policy) {
  return [policy](const GridField &f, int N) { return DyadicAverage(f, N, policy); };
}

Operator MaskedLevelOperator(MaskA mask) {
  return [mask = std::move(mask)](const GridField &f, int N) {
    GridField g = TMask(f, N, mask);
    g.compact = f.compact;
    return g;
  };
}

Operator PartialSumOperator(Enumeration e) {
  return [e = std::move(e)](const GridField &f, int N) {
    const int m = std::clamp(N + 1, 0, static_cast<int>(e.markers.size()) - 1);
    GridField g = PartialSum(f, e, e.markers[m]);
    g.compact = f.compact;
    return g;
  };
}

Operator ProjectionOperator(std::vector<HaarIndex> E) {
  return [E = std::move(E)](const GridField &f, int) {
    GridField g = ProjectionPE(f, E);
    g.compact = f.compact;
    return g;
  };
}

GridField DilatedDensity(const GridSpec &spec, int e) {
  const double a = std::ldexp(1.0, e);
  GridField f = SampleField(spec, [&](const double *x) {
    double v = a * x[0];
    for (int i = 0; i < spec.d; ++i) v *= bumps::DensityEta(a * x[i]);
    return cplx(v, 0.0);
  });
  f.compact = true;
  return f;
}

std::vector<Probe> CellProbes(const GridSpec &spec) {
  std::vector<Probe> out;
  out.push_back({"cell", [spec](int N) {
                   HaarIndex idx;
                   idx.k = N;
                   idx.nu.assign(spec.d, N > 0 ? (int64_t{1} << (N - 1)) : 0);
                   return HaarField(idx, spec);
                 }});
  out.push_back({"haar", [spec](int N) {
                   HaarIndex idx;
                   idx.k = std::max(N - 1, 0);
                   idx.nu.assign(spec.d, idx.k > 0 ? (int64_t{1} << (idx.k - 1)) : 0);
                   idx.eps = (1u << spec.d) - 1;
                   return HaarField(idx, spec);
                 }});
  return out;
}

std::vector<Probe> StandardProbes(const GridSpec &spec, const KernelBank &bank, const ProbeOptions &opt) {
  std::vector<Probe> out = CellProbes(spec);
  const int top = spec.J - 4;
  auto lvl = [top](int j) { return std::clamp(j, 1, top); };
  out.push_back({"g1", [spec](int) { return FractalFamily(FractalKind::kF1Gj, 1, spec); }});
  out.push_back({"g3", [spec](int) { return FractalFamily(FractalKind::kF1Gj, 3, spec); }});
  out.push_back({"gN+1", [spec, lvl](int N) { return FractalFamily(FractalKind::kF1Gj, lvl(N + 1), spec); }});
  out.push_back({"gN+2", [spec, lvl](int N) { return FractalFamily(FractalKind::kF1Gj, lvl(N + 2), spec); }});
  out.push_back({"gsum", [spec, lvl](int N) { return FractalFamily(FractalKind::kF1Gsum, lvl(N + 2), spec); }});
  if (spec.d >= 2) {
    out.push_back({"GN+1", [spec, lvl](int N) { return FractalFamily(FractalKind::kF2Gj, lvl(N + 1), spec); }});
    out.push_back({"Gsum", [spec, lvl](int N) { return FractalFamily(FractalKind::kF2Gsum, lvl(N + 2), spec); }});
  }
  out.push_back({"gN-1", [spec, lvl](int N) { return FractalFamily(FractalKind::kF1Gj, lvl(N - 1), spec); }});
  out.push_back({"density", [spec](int) { return DensityFailureF(spec); }});
  // Dilates of the fixed-scale probes, so that every probe is also seen at the scale of level N.
  out.push_back({"densityN", [spec](int N) { return DilatedDensity(spec, std::max(N - 2, 0)); }});
  const uint64_t seed = opt.seed;
  out.push_back({"band4", [spec, seed](int) { return RandomBandLimited(spec, 4.0, SplitMix64(seed)); }});
  out.push_back({"band16", [spec, seed](int) { return RandomBandLimited(spec, 16.0, SplitMix64(seed + 1)); }});
  out.push_back({"band4N", [spec, seed](int N) {
                   const int e = std::clamp(N - 2, 0, spec.J - 5);
                   return RandomBandLimited(spec, std::ldexp(4.0, e), SplitMix64(seed), 0.0, std::ldexp(1.0, -e));
                 }});
  out.push_back({"band16N", [spec, seed](int N) {
                   const int e = std::clamp(N - 2, 0, spec.J - 7);
                   return RandomBandLimited(spec, std::ldexp(16.0, e), SplitMix64(seed + 1), 0.0, std::ldexp(1.0, -e));
                 }});
  out.push_back({"bandN", [spec, seed](int N) {
                   const double band = std::ldexp(1.0, std::min(N, spec.J - 3));
                   return RandomBandLimited(spec, band, SplitMix64(seed + 100 + static_cast<uint64_t>(N)));
                 }});
  if (opt.include_gn && spec.d == 1) {
    const KernelBank *b = &bank;
    const int draws = opt.gn_draws;
    out.push_back({"gN", [b, draws, seed](int N) {
                     return CounterexampleGN(N, HUGE_VAL, draws, seed, *b).g;
                   }});
  }
  return out;
}

std::vector<std::vector<OpNormPoint>> OpNormLowerMulti(const Operator &op, const std::vector<Probe> &probes, double s,
                                                       double p, const std::vector<double> &qs,
                                                       const std::vector<int> &Ns, const TruncationPolicy &trunc,
                                                       const KernelBank &bank) {
  if (probes.empty()) throw HaarlabError(ErrorKind::kValidation, "probe family is empty");
  std::vector<std::vector<OpNormPoint>> out(qs.size());
  for (int N : Ns) {
    const int K = trunc.Resolve(N, bank.spec());
    std::vector<OpNormPoint> pts(qs.size());
    for (auto &pt : pts) {
      pt.N = N;
      pt.K = K;
      pt.ratio = -1.0;
    }
    for (const Probe &pr : probes) {
      try {
        GridField f = pr.make(N);
        if (f.max_abs() == 0.0) continue;
        GridField g = op(f, N);
        const auto nf = TlNormMulti(f, s, p, qs, K, bank);
        const auto ng = TlNormMulti(g, s, p, qs, K, bank);
        for (size_t i = 0; i < qs.size(); ++i) {
          if (!(nf[i].value > 0.0)) continue;
          const double r = ng[i].value / nf[i].value;
          pts[i].all.emplace_back(pr.id, r);
          if (r > pts[i].ratio) {
            pts[i].ratio = r;
            pts[i].probe = pr.id;
          }
        }
      } catch (const HaarlabError &) {
        for (auto &pt : pts) pt.skipped.push_back(pr.id);
      }
    }
    for (size_t i = 0; i < qs.size(); ++i) out[i].push_back(std::move(pts[i]));
  }
  return out;
}

std::vector<OpNormPoint> OpNormLower(const Operator &op, const std::vector<Probe> &probes, const SmoothnessParams &prm,
                                     const std::vector<int> &Ns, const TruncationPolicy &trunc,
                                     const KernelBank &bank) {
  return OpNormLowerMulti(op, probes, prm.s, prm.p, {prm.q}, Ns, trunc, bank)[0];
}

std::vector<ScanRow> RegionScan(const std::vector<ScanTuple> &tuples, const std::vector<Probe> &probes,
                                const ScanOptions &opt, const KernelBank &bank) {
  std::vector<ScanRow> rows;
  for (const ScanTuple &t : tuples) {
    ScanRow row;
    row.t = t;
    try {
      row.verdict = Classify(t.s, t.p, t.q, bank.spec().d);
      row.predicted = row.verdict.exponent;
      SmoothnessParams prm;
      prm.s = t.s;
      prm.p = t.p;
      prm.q = t.q;
      row.points = OpNormLower(AveragingOperator(), probes, prm, opt.Ns, opt.trunc, bank);
      std::vector<std::pair<double, double>> samples;
      for (const auto &pt : row.points)
        if (pt.ratio > 0.0) samples.emplace_back(pt.N, pt.ratio);
      const RateModel model = t.s <= 1.0 + kRegionTol ? RateModel::kPower : RateModel::kExponential;
      row.fit = FitRate(samples, model);
      const double tol = model == RateModel::kPower ? opt.tol_power : opt.tol_exp;
      const bool need_r2 = std::isfinite(row.predicted) && row.predicted != 0.0;
      row.agree = std::isfinite(row.predicted) && std::abs(row.fit.exponent - row.predicted) <= tol &&
                  (!need_r2 || row.fit.r2 >= opt.min_r2);
    } catch (const HaarlabError &e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void WriteScanCsv(std::ostream &os, const std::vector<ScanRow> &rows) {
  os << "s,p,q,in_A,en_uniform,schauder,unconditional,predicted_growth,predicted_exponent,model,measured_exponent,"
        "r2,agree,error\n";
  for (const auto &r : rows) {
    os << r.t.s << ',' << r.t.p << ',' << r.t.q << ',' << r.verdict.in_A << ',' << r.verdict.en_uniform << ','
       << r.verdict.schauder << ',' << r.verdict.unconditional << ',' << GrowthName(r.verdict.predicted_growth) << ','
       << r.predicted << ',' << RateModelName(r.fit.model) << ',' << r.fit.exponent << ',' << r.fit.r2 << ','
       << r.agree << ',' << '"' << r.error << '"' << '\n';
  }
}

bool IdentityReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck &c) { return c.pass; });
}

GridField PartitionFactor(const GridSpec &spec, const std::vector<int64_t> &nu) {
  GridField out = SampleField(spec, [&](const double *x) {
    double v = 1.0;
    for (int i = 0; i < spec.d; ++i) v *= bumps::Sigma1(x[i] - static_cast<double>(nu[i]));
    return cplx(v, 0.0);
  });
  return out;
}

namespace {

IdentityCheck MakeCheck(const std::string &name, double residual, double tol, const std::string &detail = "") {
  IdentityCheck c;
  c.name = name;
  c.residual = residual;
  c.tol = tol;
  c.pass = residual <= tol;
  c.detail = detail;
  return c;
}

// Whether the cube I_{k,nu} contains a cell where the field is nonzero.
bool Touches(const std::vector<char> &nz, const GridSpec &spec, int k, const std::vector<int64_t> &nu) {
  const int64_t L = int64_t{1} << (spec.J - k);
  const int64_t n = spec.n_axis();
  const int64_t shift = static_cast<int64_t>(spec.B) << spec.J;
  int64_t cells = 1;
  for (int i = 0; i < spec.d; ++i) cells *= L;
  std::vector<int64_t> idx(spec.d);
  for (int64_t c = 0; c < cells; ++c) {
    int64_t r = c;
    for (int i = spec.d - 1; i >= 0; --i) {
      idx[i] = ((nu[i] * L + shift + r % L) % n + n) % n;
      r /= L;
    }
    if (nz[Ravel(idx.data(), spec)]) return true;
  }
  return false;
}

double Residual(const GridField &a, const GridField &b) { return MaxAbsDiff(a, b); }

}  // namespace

IdentityReport IdentitySuite(const GridSpec &spec, const KernelBank &bank, const IdentityOptions &opt) {
  IdentityReport rep;
  const int k_max = std::min(opt.k_max, spec.J - 2);
  const double band = std::min(32.0, std::ldexp(1.0, spec.J - 3));
  std::vector<GridField> gs;
  for (int i = 0; i < opt.n_functions; ++i)
    gs.push_back(RandomPeriodicBandLimited(spec, band, SplitMix64(opt.seed * 1000 + static_cast<uint64_t>(i))));

  // Biorthogonality on a deterministic sample of indices.
  {
    std::vector<HaarIndex> idx;
    uint64_t st = opt.seed;
    const uint32_t eps_count = 1u << spec.d;
    for (int t = 0; t < 24; ++t) {
      st = SplitMix64(st);
      HaarIndex h;
      h.k = static_cast<int>(st % static_cast<uint64_t>(k_max + 1));
      const int64_t span = static_cast<int64_t>(spec.B) << (h.k + 1);
      for (int i = 0; i < spec.d; ++i) {
        st = SplitMix64(st);
        h.nu.push_back(static_cast<int64_t>(st % static_cast<uint64_t>(span)) - span / 2);
      }
      st = SplitMix64(st);
      h.eps = static_cast<uint32_t>(st % eps_count);
      if (h.eps == 0) {
        // Scaling functions live on unit cubes only.
        for (auto &v : h.nu) v = FloorDiv(v, int64_t{1} << h.k);
        h.k = 0;
      }
      if (std::find(idx.begin(), idx.end(), h) == idx.end()) idx.push_back(h);
    }
    double worst = 0.0;
    for (const auto &m : idx) {
      GridField um = HaarField(m, spec);
      for (const auto &n : idx) {
        const double target = (m == n) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(HaarCoeff(um, n) - target));
      }
    }
    rep.checks.push_back(MakeCheck("biorthogonality", worst, 1e-12, std::to_string(idx.size()) + " indices"));
  }

  // E_N E_M = E_min(N,M).
  {
    double worst = 0.0;
    for (size_t i = 0; i < std::min<size_t>(gs.size(), 3); ++i) {
      const double scale = gs[i].max_abs();
      for (int N = 0; N <= k_max; ++N) {
        GridField eN = DyadicAverage(gs[i], N);
        for (int M = 0; M <= k_max; ++M) {
          GridField lhs = DyadicAverage(eN, M);
          GridField rhs = DyadicAverage(gs[i], std::min(N, M));
          worst = std::max(worst, Residual(lhs, rhs) / scale);
        }
      }
    }
    rep.checks.push_back(MakeCheck("average_nesting", worst, 1e-12, "idempotence included (N = M)"));
  }

  // T_N[., 1] = E_{N+1} - E_N, with T_{-1}[., 1] = E_0.
  {
    double worst = 0.0;
    // The fault drops the weight of one cube, which keeps the mask admissible.
    MaskA one = MaskA::Constant(1.0);
    if (opt.fault == "martingale") one.set(std::vector<int64_t>(spec.d, 0), (1u << spec.d) - 1, 0.0);
    for (size_t i = 0; i < std::min<size_t>(gs.size(), 3); ++i) {
      const double scale = gs[i].max_abs();
      for (int N = -1; N < k_max; ++N) {
        GridField lhs = TMask(gs[i], N, one);
        GridField rhs = DyadicAverage(gs[i], N + 1);
        if (N >= 0) rhs -= DyadicAverage(gs[i], N);
        worst = std::max(worst, Residual(lhs, rhs) / scale);
      }
    }
    rep.checks.push_back(MakeCheck("martingale", worst, 1e-12));
  }

  // Localization of partial sums of the canonical enumeration.
  {
    const Enumeration e = BuildCanonicalEnumeration(k_max, -spec.B, spec.B, spec.d);
    std::map<std::pair<int, std::pair<std::vector<int64_t>, uint32_t>>, int64_t> pos;
    for (size_t i = 0; i < e.items.size(); ++i) {
      const auto &h = e.items[i];
      pos[{h.is_scaling() ? -1 : h.k, {h.nu, h.eps}}] = static_cast<int64_t>(i);
    }
    std::vector<int64_t> Rs;
    uint64_t st = SplitMix64(opt.seed + 17);
    const int nm = static_cast<int>(e.markers.size());
    for (int r = 0; r < opt.n_R; ++r) {
      st = SplitMix64(st);
      const int m = 1 + static_cast<int>(st % static_cast<uint64_t>(nm - 1));
      const int64_t off = static_cast<int64_t>(r % 3) - 1;
      Rs.push_back(std::clamp<int64_t>(e.markers[m] + off, 1, static_cast<int64_t>(e.items.size())));
    }
    double worst = 0.0;
    bool fault_done = false;
    for (size_t i = 0; i < gs.size(); ++i) {
      std::vector<int64_t> nu(spec.d, static_cast<int64_t>(i % 2) - 1);
      GridField g = gs[i];
      const GridField sig = PartitionFactor(spec, nu);
      for (int64_t c = 0; c < g.size(); ++c) g[c] *= sig[c];
      const double scale = gs[i].max_abs();
      std::vector<char> nz(static_cast<size_t>(g.size()));
      for (int64_t c = 0; c < g.size(); ++c) nz[c] = g[c] != cplx(0.0, 0.0);
      // Items meeting the support, grouped by level code (-1: scaling).
      std::map<int, std::vector<const HaarIndex *>> touching;
      for (const auto &h : e.items)
        if (Touches(nz, spec, h.k, h.nu)) touching[h.is_scaling() ? -1 : h.k].push_back(&h);
      for (int64_t R : Rs) {
        auto position = [&](const HaarIndex &h) { return pos.at({h.is_scaling() ? -1 : h.k, {h.nu, h.eps}}); };
        int Nv = -1;
        for (int code = -1; code <= k_max; ++code) {
          bool all = true;
          for (const HaarIndex *h : touching[code]) all = all && position(*h) < R;
          if (!all) break;
          Nv = code + 1;
        }
        GridField lhs = PartialSum(g, e, R);
        GridField rhs = Nv >= 0 ? DyadicAverage(g, Nv) : GridField(spec, g.is_complex);
        for (int kappa = 0; kappa <= e.b; ++kappa) {
          const int code = Nv + kappa;
          if (code > k_max) break;
          MaskA a;
          for (const HaarIndex *h : touching[code])
            if (position(*h) < R) a.set(h->nu, h->eps, 1.0);
          if (opt.fault == "mask" && !fault_done && !a.entries.empty()) {
            a.entries.begin()->second = 0.0;
            fault_done = true;
          }
          rhs += TMask(g, code, a);
        }
        worst = std::max(worst, Residual(lhs, rhs) / scale);
      }
    }
    rep.checks.push_back(MakeCheck("localization", worst, 1e-10,
                                   "b = " + std::to_string(e.b) + ", " + std::to_string(Rs.size()) + " R values"));
  }

  // L_k E_N f vanishes away from the level-N hyperplanes, k > N.
  {
    double worst = 0.0;
    const GridField &f = gs[0];
    const double scale = f.max_abs() * bank.moments().beta_l1;
    const double h = spec.h();
    for (int N = 2; N <= 4; ++N) {
      GridField eN = DyadicAverage(f, N);
      if (opt.fault == "support") {
        // A spike at the center of a level-N cube, far from its faces.
        std::vector<int64_t> mid(spec.d, spec.axis_index(std::ldexp(1.0, -N - 1)));
        eN[Ravel(mid.data(), spec)] += 1e-3 * f.max_abs();
      }
      for (int gap = 1; gap <= 3; ++gap) {
        const int k = N + gap;
        if (k > spec.J - 2) continue;
        GridField lk = LocalMean(eN, k, bank);
        const double reach = std::ldexp(std::max(1.0, bank.width()) / 2.0, -k) + h;
        std::vector<int64_t> idx(spec.d);
        for (int64_t c = 0; c < lk.size(); ++c) {
          Unravel(c, spec, idx.data());
          bool inside_u = false;
          for (int i = 0; i < spec.d && !inside_u; ++i) inside_u = DistToLattice(spec.coord(idx[i]), N) <= reach;
          if (!inside_u) worst = std::max(worst, std::abs(lk[c]) / scale);
        }
      }
    }
    rep.checks.push_back(MakeCheck("support", worst, 1e-10, "k - N in {1,2,3}"));
  }

  // sum_nu sigma(x - nu) = 1.
  {
    GridField sum(spec);
    const int64_t lo = -spec.B - 1, hi = spec.B;
    std::vector<int64_t> nu(spec.d, lo);
    while (true) {
      sum += PartitionFactor(spec, nu);
      int i = spec.d - 1;
      while (i >= 0 && nu[i] == hi) nu[i--] = lo;
      if (i < 0) break;
      ++nu[i];
    }
    double worst = 0.0;
    for (int64_t c = 0; c < sum.size(); ++c) worst = std::max(worst, std::abs(sum[c] - 1.0));
    rep.checks.push_back(MakeCheck("partition", worst, 1e-10));
  }
  return rep;
}

void WriteIdentityCsv(std::ostream &os, const IdentityReport &r) {
  os << "check,residual,tolerance,pass,detail\n";
  for (const auto &c : r.checks)
    os << c.name << ',' << c.residual << ',' << c.tol << ',' << (c.pass ? "PASS" : "FAIL") << ",\"" << c.detail
       << "\"\n";
}

NonconvergenceResult NonconvergenceProbe(const GridField &f, const SmoothnessParams &prm, const std::vector<int> &Ns,
                                         const TruncationPolicy &trunc, const KernelBank &bank) {
  NonconvergenceResult res;
  for (int N : Ns) {
    GridField e = DyadicAverage(f, N) - f;
    e.compact = f.compact;
    SmoothnessParams p = prm;
    p.K = trunc.Resolve(N, f.spec);
    res.series.emplace_back(N, TlNorm(e, p, bank).value);
  }
  if (res.series.empty()) return res;
  res.first = res.series.front().second;
  res.last = res.series.back().second;
  res.floor = res.first;
  for (const auto &pt : res.series) res.floor = std::min(res.floor, pt.second);
  if (res.series.size() >= 3 && res.floor > 0.0) res.fit = FitRate(res.series, RateModel::kExponential);
  return res;
}

std::vector<PacketGrowthRow> PacketGrowth(const std::vector<int> &Ns, const PacketGrowthOptions &opt) {
  std::vector<PacketGrowthRow> rows;
  for (int N : Ns) {
    const PacketLayout lay = CompressedLayout(N, opt.lowest, opt.gap);
    PacketGrowthRow row;
    row.N = N;
    row.n = lay.avg_level;
    row.K = lay.avg_level + opt.delta;
    row.J = row.K + 2;
    const GridSpec spec{1, row.J, 1};
    KernelBank bank = KernelBank::Build(opt.kernel, spec);
    GNResult gn = CounterexampleGN(N, HUGE_VAL, opt.n_draws, opt.seed, bank, opt.p, &lay);
    row.lower_bound = gn.value;
    GridField avg = DyadicAverage(gn.g, lay.avg_level);
    const auto nf = TlNormMulti(gn.g, 1.0, opt.p, opt.qs, row.K, bank);
    const auto na = TlNormMulti(avg, 1.0, opt.p, opt.qs, row.K, bank);
    for (size_t i = 0; i < opt.qs.size(); ++i) row.ratios.push_back(na[i].value / nf[i].value);
    bank.DropCache();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace haarlab
