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

#include "haarlab/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <mutex>

#include "haarlab/bumps.hpp"
#include "haarlab/fft.hpp"

namespace haarlab {

double Eta0Profile::operator()(double r) const {
  if (r <= inner) return 1.0;
  if (r >= outer) return 0.0;
  return 1.0 - bumps::SmoothStep((r - inner) / (outer - inner));
}

void SmoothnessParams::Validate(int d) const {
  if (!(p > 0.0)) throw HaarlabError(ErrorKind::kValidation, "p must be positive");
  if (!(q > 0.0)) throw HaarlabError(ErrorKind::kValidation, "q must be positive");
  if (K < 0) throw HaarlabError(ErrorKind::kValidation, "K must be nonnegative");
  const double a = EffectiveA(d);
  const double dp = std::isinf(p) ? 0.0 : d / p;
  if (!(a > dp)) throw HaarlabError(ErrorKind::kValidation, "A must exceed d/p");
  if (!(M > a + std::abs(s) + 2.0))
    throw HaarlabError(ErrorKind::kValidation, "M must exceed A + |s| + 2");
}

double SmoothnessParams::EffectiveA(int d) const {
  if (A > 0.0) return A;
  return (std::isinf(p) ? 0.0 : d / p) + 0.25;
}

struct KernelBank::Cache {
  std::mutex mu;
  std::map<int, std::shared_ptr<const LevelFactors>> levels;
  size_t bytes = 0;
  static constexpr size_t kBudget = size_t{768} << 20;
};

namespace {

void EnumerateGammas(int d, int m, std::vector<std::vector<double>> *out) {
  // Each entry: gamma_1..gamma_d followed by m!/gamma!.
  std::vector<int> g(d, 0);
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == d - 1) {
      g[axis] = left;
      std::vector<double> e(g.begin(), g.end());
      double c = fact(m);
      for (int v : g) c /= fact(v);
      e.push_back(c);
      out->push_back(e);
      return;
    }
    for (int v = left; v >= 0; --v) {
      g[axis] = v;
      rec(axis + 1, left - v);
    }
  };
  rec(0, m);
}

void EnumerateMultiIndices(int d, int maxdeg, std::vector<std::vector<int>> *out) {
  std::vector<int> a(d, 0);
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == d) {
      out->push_back(a);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      a[axis] = v;
      rec(axis + 1, left - v);
    }
  };
  rec(0, maxdeg);
}

}  // namespace

double KernelBank::BumpDeriv(int r, double u) const {
  double buf[32];
  const double t = 2.0 * u / width_;
  bumps::ExpBumpDerivs(t, r, opt_.shape_a, buf);
  return std::pow(2.0 / width_, r) * buf[r] / norm_;
}

double KernelBank::Bump0(double u) const { return bumps::ExpBump(2.0 * u, opt_.shape_a) / norm0_; }

double KernelBank::Beta1d(double u) const { return c_ * BumpDeriv(2 * m_, u); }

double KernelBank::Primitive(double u) const { return c_ * BumpDeriv(2 * m_ - 1, u); }

namespace {

double CosTransform(const std::function<double(double)> &fn, double half, double xi) {
  static thread_local std::vector<double> x, w;
  static thread_local double cached_half = -1.0;
  if (cached_half != half) {
    bumps::GaussRule(-half, half, 32, 16, &x, &w);
    cached_half = half;
  }
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += w[i] * fn(x[i]) * std::cos(2 * M_PI * xi * x[i]);
  return s;
}

}  // namespace

double KernelBank::BetaHat(const double *xi) const {
  double r2 = 0.0, prod = 1.0;
  for (int i = 0; i < spec_.d; ++i) {
    r2 += xi[i] * xi[i];
    prod *= CosTransform([this](double u) { return BumpDeriv(0, u); }, width_ / 2, xi[i]);
  }
  return std::pow(64.0 * r2, m_) * prod;
}

double KernelBank::Beta0Hat(const double *xi) const {
  double prod = 1.0;
  for (int i = 0; i < spec_.d; ++i)
    prod *= CosTransform([this](double u) { return Bump0(u); }, 0.5, xi[i]);
  return prod;
}

double KernelBank::Eta0(const double *xi, int k) const {
  double r2 = 0.0;
  for (int i = 0; i < spec_.d; ++i) r2 += xi[i] * xi[i];
  return opt_.eta0(std::ldexp(std::sqrt(r2), -k));
}

KernelBank KernelBank::Build(const KernelOptions &opt, const GridSpec &spec) {
  spec.Validate();
  if (spec.J < 6) throw HaarlabError(ErrorKind::kResolutionTooCoarse, "grid step must be <= 2^-6");
  if (opt.M < 1) throw HaarlabError(ErrorKind::kValidation, "M must be >= 1");
  KernelBank bank;
  bank.opt_ = opt;
  bank.spec_ = spec;
  bank.m_ = (opt.M + 2) / 2;  // ceil((M+1)/2)
  bank.c_ = std::pow(-16.0 / (M_PI * M_PI), bank.m_);
  bank.cache_ = std::make_shared<Cache>();
  EnumerateGammas(spec.d, bank.m_, &bank.multinomial_);
  {
    std::vector<double> x, w;
    bumps::GaussRule(-1.0, 1.0, 16, 16, &x, &w);
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += w[i] * bumps::ExpBump(x[i], opt.shape_a);
    bank.norm0_ = 0.5 * s;
    bank.norm_ = 0.5 * s;
  }

  // Frequency lattice at the finest working scale, capped per axis.
  const int d = spec.d;
  const int cap = d == 1 ? 8192 : (d == 2 ? 384 : 48);
  const double fine = 1.0 / (2.0 * spec.B * std::ldexp(1.0, std::max(spec.J - 2, 0)));
  const double step = std::max(fine, 2.0 / cap);
  const int64_t half_count = static_cast<int64_t>(std::floor(1.0 / step));
  auto lattice_min = [&](auto &&hat1d, double rlo, double rhi, auto &&radial) {
    std::vector<double> axis_vals(2 * half_count + 1), axis_xi(2 * half_count + 1);
    for (int64_t i = -half_count; i <= half_count; ++i) {
      axis_xi[i + half_count] = i * step;
      axis_vals[i + half_count] = hat1d(i * step);
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<int64_t> idx(d, 0);
    const int64_t cnt = 2 * half_count + 1;
    int64_t total = 1;
    for (int i = 0; i < d; ++i) total *= cnt;
    for (int64_t f = 0; f < total; ++f) {
      int64_t r = f;
      double r2 = 0.0, prod = 1.0;
      for (int i = d - 1; i >= 0; --i) {
        const int64_t a = r % cnt;
        r /= cnt;
        r2 += axis_xi[a] * axis_xi[a];
        prod *= axis_vals[a];
      }
      const double rad = std::sqrt(r2);
      if (rad < rlo || rad > rhi) continue;
      best = std::min(best, std::abs(radial(r2) * prod));
    }
    return best;
  };

  bool ok = false;
  for (double wdt : opt.dilation_ladder) {
    bank.width_ = wdt;
    bank.norm_ = bank.norm0_ * wdt;
    const double floor = lattice_min(
        [&](double xi) { return CosTransform([&](double u) { return bank.BumpDeriv(0, u); }, wdt / 2, xi); },
        0.125, 1.0, [&](double r2) { return std::pow(64.0 * r2, bank.m_); });
    bank.fourier_floor_ = floor;
    if (floor >= opt.delta_min) {
      ok = true;
      break;
    }
  }
  if (!ok) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "min |beta^| on annulus = %.3g < %.3g", bank.fourier_floor_, opt.delta_min);
    throw HaarlabError(ErrorKind::kFourierFloorViolation, buf);
  }
  bank.beta0_floor_ = lattice_min(
      [&](double xi) { return CosTransform([&](double u) { return bank.Bump0(u); }, 0.5, xi); }, 0.0, 1.0,
      [](double) { return 1.0; });
  if (bank.beta0_floor_ < opt.delta_min)
    throw HaarlabError(ErrorKind::kFourierFloorViolation, "beta0 transform below floor on the unit ball");

  // Moment certificate from one-dimensional factor moments.
  {
    std::vector<double> x, w;
    bumps::GaussRule(-bank.width_ / 2, bank.width_ / 2, 32, 20, &x, &w);
    const int M = opt.M;
    std::vector<std::vector<double>> mom(bank.m_ + 1, std::vector<double>(M + 1, 0.0));
    std::vector<double> l1(bank.m_ + 1, 0.0);
    for (int g = 0; g <= bank.m_; ++g) {
      for (size_t i = 0; i < x.size(); ++i) {
        const double v = bank.BumpDeriv(2 * g, x[i]);
        double pw = 1.0;
        for (int a = 0; a <= M; ++a) {
          mom[g][a] += w[i] * pw * v;
          pw *= x[i];
        }
        l1[g] += w[i] * std::abs(v);
      }
    }
    double beta_l1 = 0.0;
    for (const auto &e : bank.multinomial_) {
      double t = std::abs(bank.c_) * e[d];
      for (int i = 0; i < d; ++i) t *= l1[static_cast<int>(e[i])];
      beta_l1 += t;
    }
    std::vector<std::vector<int>> alphas;
    EnumerateMultiIndices(d, M, &alphas);
    MomentCertificate cert;
    cert.beta_l1 = beta_l1;
    for (const auto &al : alphas) {
      double val = 0.0;
      for (const auto &e : bank.multinomial_) {
        double t = bank.c_ * e[d];
        for (int i = 0; i < d; ++i) t *= mom[static_cast<int>(e[i])][al[i]];
        val += t;
      }
      if (std::abs(val) > cert.max_abs) {
        cert.max_abs = std::abs(val);
        cert.worst = al;
      }
    }
    cert.max_rel = cert.max_abs / beta_l1;
    bank.moments_ = cert;
  }

  // Point-sampled level-0 fields.
  const int64_t n = spec.n_axis();
  std::vector<std::vector<double>> axis_d(bank.m_ + 1, std::vector<double>(n));
  std::vector<double> axis0(n), axis_sig(n);
  for (int64_t i = 0; i < n; ++i) {
    const double t = spec.coord(i);
    for (int g = 0; g <= bank.m_; ++g) axis_d[g][i] = bank.BumpDeriv(2 * g, t);
    axis0[i] = bank.Bump0(t);
    axis_sig[i] = bumps::Sigma1(t);
  }
  bank.beta0_ = GridField(spec);
  bank.beta_ = GridField(spec);
  bank.sigma_bump_ = GridField(spec);
  std::vector<int64_t> idx(d);
  for (int64_t f = 0; f < spec.size(); ++f) {
    Unravel(f, spec, idx.data());
    double p0 = 1.0, ps = 1.0, b = 0.0;
    for (int i = 0; i < d; ++i) {
      p0 *= axis0[idx[i]];
      ps *= axis_sig[idx[i]];
    }
    for (const auto &e : bank.multinomial_) {
      double t = bank.c_ * e[d];
      for (int i = 0; i < d; ++i) t *= axis_d[static_cast<int>(e[i])][idx[i]];
      b += t;
    }
    bank.beta0_[f] = p0;
    bank.beta_[f] = b;
    bank.sigma_bump_[f] = ps;
  }
  bank.beta0_.compact = bank.beta_.compact = bank.sigma_bump_.compact = true;
  if (d == 1) {
    bank.beta_primitive_ = SampleField(spec, [&](const double *x) { return cplx(bank.Primitive(x[0]), 0.0); });
    bank.beta_primitive_.compact = true;
  }
  // Phi: transform equal to 1 on the unit ball, vanishing beyond radius 2.
  {
    Eta0Profile prof{1.0, 2.0};
    GridField phi(spec);
    phi.values.assign(static_cast<size_t>(spec.size()), cplx(1.0, 0.0));
    ApplyMultiplier(&phi.values, spec, [&](const double *xi, const int64_t *) {
      double r2 = 0.0;
      for (int i = 0; i < d; ++i) r2 += xi[i] * xi[i];
      return prof(std::sqrt(r2));
    });
    FftInverse(&phi.values, spec);
    // Normalize so that the sample sum approximates the continuous transform.
    const double scale = 1.0 / spec.cell_volume();
    for (auto &v : phi.values) v = cplx(v.real() * scale, 0.0);
    // Center at the origin: the inverse transform of a real even symbol lives at index 0.
    bank.phi_ = phi;
  }
  return bank;
}

std::string KernelBank::Hash() const {
  uint64_t hsh = 1469598103934665603ULL;
  auto mix = [&](const void *p, size_t len) {
    const auto *b = static_cast<const unsigned char *>(p);
    for (size_t i = 0; i < len; ++i) {
      hsh ^= b[i];
      hsh *= 1099511628211ULL;
    }
  };
  mix(&opt_.M, sizeof(int));
  mix(&opt_.shape_a, sizeof(double));
  mix(&opt_.delta_min, sizeof(double));
  mix(&opt_.eta0.inner, sizeof(double));
  mix(&opt_.eta0.outer, sizeof(double));
  mix(&width_, sizeof(double));
  mix(&spec_.d, sizeof(int));
  mix(&spec_.J, sizeof(int));
  mix(&spec_.B, sizeof(int));
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hsh));
  return buf;
}

std::shared_ptr<const KernelBank::LevelFactors> KernelBank::ComputeFactors(int k) const {
  const int64_t n = spec_.n_axis();
  const double h = spec_.h();
  auto lf = std::make_shared<LevelFactors>();
  auto wrap = [n](int64_t o) { return ((o % n) + n) % n; };
  const double scale = std::ldexp(1.0, k);
  const double half_support = (k == 0 ? 0.5 : width_ / 2);
  const int64_t omax = std::min<int64_t>(n / 2 - 1, static_cast<int64_t>(std::ceil(half_support / (scale * h))) + 1);
  std::vector<double> gx, gw;
  bumps::GaussRule(-0.5, 0.5, 1, 8, &gx, &gw);
  auto cell_integral = [&](auto &&fn, int64_t o) {
    // Integral over the scaled cell of fn(u) du.
    const double a = scale * (o - 0.5) * h, b = scale * (o + 0.5) * h;
    double s = 0.0;
    for (size_t i = 0; i < gx.size(); ++i) s += gw[i] * fn(a + (b - a) * (gx[i] + 0.5));
    return s * (b - a);
  };
  if (k == 0) {
    std::vector<cplx> w(n, cplx(0.0, 0.0));
    for (int64_t o = -omax; o <= omax; ++o)
      w[wrap(o)] = cell_integral([this](double u) { return Bump0(u); }, o);
    Fft1d(&w);
    lf->by_order.push_back(std::move(w));
    return lf;
  }
  lf->by_order.resize(m_ + 1);
  const int gmin = spec_.d == 1 ? m_ : 0;
  for (int g = gmin; g <= m_; ++g) {
    std::vector<cplx> w(n, cplx(0.0, 0.0));
    if (g == 0) {
      for (int64_t o = -omax; o <= omax; ++o)
        w[wrap(o)] = cell_integral([this](double u) { return BumpDeriv(0, u); }, o);
    } else {
      // Exact cell integrals by differences of the (2g-1)-th derivative.
      double prev = BumpDeriv(2 * g - 1, scale * (-omax - 0.5) * h);
      for (int64_t o = -omax; o <= omax; ++o) {
        const double next = BumpDeriv(2 * g - 1, scale * (o + 0.5) * h);
        w[wrap(o)] = next - prev;
        prev = next;
      }
    }
    Fft1d(&w);
    lf->by_order[g] = std::move(w);
  }
  return lf;
}

std::shared_ptr<const KernelBank::LevelFactors> KernelBank::Factors(int k) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->levels.find(k);
    if (it != cache_->levels.end()) return it->second;
  }
  auto lf = ComputeFactors(k);
  size_t bytes = 0;
  for (const auto &v : lf->by_order) bytes += v.size() * sizeof(cplx);
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (cache_->bytes + bytes <= Cache::kBudget) {
    cache_->levels.emplace(k, lf);
    cache_->bytes += bytes;
  }
  return lf;
}

void KernelBank::Prepare(int k) const { Factors(k); }

void KernelBank::DropCache() const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->levels.clear();
  cache_->bytes = 0;
}

KernelBank::Symbol KernelBank::LevelSymbol(int k) const {
  Symbol s;
  s.bank_ = this;
  s.k_ = k;
  s.f_ = Factors(k);
  return s;
}

cplx KernelBank::Symbol::operator()(const int64_t *idx) const {
  const int d = bank_->spec_.d;
  const auto &f = f_->by_order;
  if (k_ == 0) {
    cplx v(1.0, 0.0);
    for (int i = 0; i < d; ++i) v *= f[0][idx[i]];
    return v;
  }
  if (d == 1) return bank_->c_ * f[bank_->m_][idx[0]];
  cplx v(0.0, 0.0);
  for (const auto &e : bank_->multinomial_) {
    cplx t(bank_->c_ * e[d], 0.0);
    for (int i = 0; i < d; ++i) t *= f[static_cast<int>(e[i])][idx[i]];
    v += t;
  }
  return v;
}

Spectrum ToSpectrum(const GridField &f) {
  Spectrum s;
  s.spec = f.spec;
  s.hat = f.values;
  s.is_complex = f.is_complex;
  FftForward(&s.hat, f.spec);
  return s;
}

namespace {

void CheckLevel(int k, const GridSpec &spec, const char *what) {
  if (k < 0 || k > spec.J - 2) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s level %d outside [0, J-2] for J=%d", what, k, spec.J);
    throw HaarlabError(ErrorKind::kResolutionTooCoarse, buf);
  }
}

void CheckBank(const GridSpec &spec, const KernelBank &bank) {
  if (spec != bank.spec()) throw HaarlabError(ErrorKind::kValidation, "field and kernel bank grids differ");
}

GridField FromSpectrum(std::vector<cplx> hat, const GridSpec &spec, bool complex_valued) {
  FftInverse(&hat, spec);
  GridField out(spec, complex_valued);
  out.values = std::move(hat);
  if (!complex_valued)
    for (auto &v : out.values) v = cplx(v.real(), 0.0);
  return out;
}

template <typename Fn>
GridField ApplyLevelMultiplier(const Spectrum &f, Fn &&fn) {
  std::vector<cplx> hat = f.hat;
  ApplyMultiplier(&hat, f.spec, fn);
  return FromSpectrum(std::move(hat), f.spec, f.is_complex);
}

double LambdaNumerator(const KernelBank &bank, const double *xi, int k) {
  if (k == 0) return bank.Eta0(xi, 0);
  return bank.Eta0(xi, k) - bank.Eta0(xi, k - 1);
}

void CheckFloor(const Spectrum &f, int k, const KernelBank &bank) {
  // The denominator must stay above the floor wherever the numerator is active.
  std::atomic<bool> bad{false};
  std::atomic<int64_t> bad_index{-1};
  double worst = std::numeric_limits<double>::infinity();
  const GridSpec &spec = f.spec;
  const int64_t total = spec.size();
  std::vector<int64_t> idx(spec.d);
  std::vector<double> xi(spec.d);
  const auto sym = bank.LevelSymbol(k);
  for (int64_t t = 0; t < total; ++t) {
    int64_t r = t;
    for (int i = spec.d - 1; i >= 0; --i) {
      idx[i] = r % spec.n_axis();
      r /= spec.n_axis();
      xi[i] = spec.freq(idx[i]);
    }
    if (LambdaNumerator(bank, xi.data(), k) == 0.0) continue;
    const double den = std::abs(sym(idx.data()));
    if (den < worst) worst = den;
    if (den < bank.delta_min()) {
      bad = true;
      bad_index = t;
    }
  }
  if (bad) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "level %d: |L_k multiplier| = %.3g below floor %.3g (bin %lld)", k, worst,
                  bank.delta_min(), static_cast<long long>(bad_index.load()));
    throw HaarlabError(ErrorKind::kFourierFloorViolation, buf);
  }
}

}  // namespace

GridField LocalMean(const Spectrum &f, int k, const KernelBank &bank) {
  CheckLevel(k, f.spec, "local_mean");
  CheckBank(f.spec, bank);
  const auto sym = bank.LevelSymbol(k);
  return ApplyLevelMultiplier(f, [&](const double *, const int64_t *idx) { return sym(idx); });
}

GridField LocalMean(const GridField &f, int k, const KernelBank &bank) {
  CheckLevel(k, f.spec, "local_mean");
  if (f.compact) {
    const double radius = std::ldexp(k == 0 ? 0.5 : bank.width() / 2, -k);
    const double margin = f.support_margin();
    if (margin < radius) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "support margin %.4g below kernel radius %.4g", margin, radius);
      throw HaarlabError(ErrorKind::kMarginViolation, buf);
    }
  }
  return LocalMean(ToSpectrum(f), k, bank);
}

GridField LambdaOp(const GridField &f, int k, const KernelBank &bank) {
  CheckLevel(k, f.spec, "lambda_op");
  CheckBank(f.spec, bank);
  Spectrum s = ToSpectrum(f);
  CheckFloor(s, k, bank);
  const auto sym = bank.LevelSymbol(k);
  return ApplyLevelMultiplier(s, [&](const double *xi, const int64_t *idx) {
    const double num = LambdaNumerator(bank, xi, k);
    if (num == 0.0) return cplx(0.0, 0.0);
    return cplx(num, 0.0) / sym(idx);
  });
}

GridField PiOp(const GridField &f, int N, const KernelBank &bank) {
  CheckLevel(N, f.spec, "pi_op");
  CheckBank(f.spec, bank);
  return ApplyLevelMultiplier(ToSpectrum(f),
                              [&](const double *xi, const int64_t *) { return cplx(bank.Eta0(xi, N), 0.0); });
}

GridField ResolutionTerm(const Spectrum &f, int k, const KernelBank &bank) {
  CheckLevel(k, f.spec, "resolution_term");
  CheckBank(f.spec, bank);
  return ApplyLevelMultiplier(
      f, [&](const double *xi, const int64_t *) { return cplx(LambdaNumerator(bank, xi, k), 0.0); });
}

GridField ResolutionTerm(const GridField &f, int k, const KernelBank &bank) {
  return ResolutionTerm(ToSpectrum(f), k, bank);
}

namespace {

void PeetreKernel(const GridField &g, const std::vector<double> &weights, const std::vector<int64_t> &offsets,
                  GridField *out, bool parallel) {
  const GridSpec &spec = g.spec;
  const int d = spec.d;
  const int64_t n = spec.n_axis();
  const int64_t total = spec.size();
  std::vector<double> mag(total);
  for (int64_t i = 0; i < total; ++i) mag[i] = std::abs(g[i]);
  const size_t noff = weights.size();
  auto body = [&](int64_t x) {
    int64_t xi[8];
    int64_t r = x;
    for (int i = d - 1; i >= 0; --i) {
      xi[i] = r % n;
      r /= n;
    }
    double best = 0.0;
    for (size_t o = 0; o < noff; ++o) {
      int64_t flat = 0;
      for (int i = 0; i < d; ++i) {
        int64_t c = xi[i] + offsets[o * d + i];
        if (c >= n) c -= n;
        if (c < 0) c += n;
        flat = flat * n + c;
      }
      const double v = mag[flat] * weights[o];
      if (v > best) best = v;
    }
    (*out)[x] = cplx(best, 0.0);
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (int64_t x = 0; x < total; ++x) body(x);
  } else {
    for (int64_t x = 0; x < total; ++x) body(x);
  }
}

}  // namespace

PeetreResult PeetreMax(const GridField &g, double A, int j, const PeetreOptions &opt) {
  if (!(A > 0.0) || j < 0) throw HaarlabError(ErrorKind::kValidation, "peetre_max needs A > 0 and j >= 0");
  const GridSpec &spec = g.spec;
  const int d = spec.d;
  const int64_t n = spec.n_axis();
  const double h = spec.h();
  const double scale = std::ldexp(1.0, j);
  std::vector<double> weights;
  std::vector<int64_t> offsets;
  const int64_t total = spec.size();
  std::vector<int64_t> idx(d);
  for (int64_t f = 0; f < total; ++f) {
    Unravel(f, spec, idx.data());
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const int64_t o = idx[i] < n / 2 ? idx[i] : idx[i] - n;  // minimal periodic image
      idx[i] = o;
      r2 += static_cast<double>(o) * o;
    }
    const double dist = h * std::sqrt(r2);
    if (opt.r_trunc >= 0.0 && dist > opt.r_trunc) continue;
    weights.push_back(std::pow(1.0 + scale * dist, -A));
    for (int i = 0; i < d; ++i) offsets.push_back(idx[i]);
  }
  PeetreResult res;
  res.value = GridField(spec);
  PeetreKernel(g, weights, offsets, &res.value, opt.policy == ExecPolicy::kParallel);
  if (opt.r_trunc >= 0.0) res.truncation_bound = g.max_abs() * std::pow(1.0 + scale * opt.r_trunc, -A);
  return res;
}

double BkjSup(int k, int j, const KernelBank &bank) {
  const GridSpec &spec = bank.spec();
  if (spec.d != 1) throw HaarlabError(ErrorKind::kValidation, "BkjSup is one-dimensional");
  const double fj = std::ldexp(1.0, j);
  GridField psi = SampleField(
      spec,
      [&](const double *x) { return std::polar(bumps::Psi(x[0]), 2 * M_PI * fj * x[0]); }, true);
  psi.compact = true;
  return LocalMean(psi, k, bank).max_abs();
}

}  // namespace haarlab
